//! Small dense complex linear algebra: 2x2 matrices for Lax/transfer
//! work and a partial-pivot elimination for the N-pole residue systems
//! (N stays small, so a direct dense solve is the right tool).

use crate::{Cx, Error, Result};

/// Row-major 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m11: Cx,
    pub m12: Cx,
    pub m21: Cx,
    pub m22: Cx,
}

impl Mat2 {
    pub const fn new(m11: Cx, m12: Cx, m21: Cx, m22: Cx) -> Self {
        Mat2 { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Mat2::new(Cx::new(1.0, 0.0), Cx::new(0.0, 0.0), Cx::new(0.0, 0.0), Cx::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Mat2::new(Cx::new(0.0, 0.0), Cx::new(0.0, 0.0), Cx::new(0.0, 0.0), Cx::new(0.0, 0.0))
    }

    pub fn det(&self) -> Cx {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Inverse through the adjugate; caller guarantees det away from 0.
    pub fn inv(&self) -> Mat2 {
        let d = self.det();
        Mat2::new(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2::new(self.m11 + o.m11, self.m12 + o.m12, self.m21 + o.m21, self.m22 + o.m22)
    }

    pub fn scale(&self, c: Cx) -> Mat2 {
        Mat2::new(c * self.m11, c * self.m12, c * self.m21, c * self.m22)
    }

    pub fn max_abs(&self) -> f64 {
        self.m11
            .norm()
            .max(self.m12.norm())
            .max(self.m21.norm())
            .max(self.m22.norm())
    }
}

/// Solution of a dense complex system with several right-hand sides,
/// plus a 1-norm condition estimate computed from the explicit inverse.
pub struct DenseSolution {
    pub columns: Vec<Vec<Cx>>,
    pub cond_1: f64,
}

/// Gaussian elimination with partial pivoting. `a` is row-major n x n,
/// `rhs` holds the right-hand sides as columns. Errors on a pivot
/// collapsing to zero (degenerate pole configurations produce this).
pub fn solve_dense(a: &[Vec<Cx>], rhs: &[Vec<Cx>]) -> Result<DenseSolution> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "matrix must be square");
    assert!(rhs.iter().all(|col| col.len() == n), "rhs length mismatch");

    let norm_a = one_norm(a, n);

    // Augment with the right-hand sides and the identity (for the
    // inverse, which both answers cond_1 and keeps the solve exact).
    let m = rhs.len();
    let width = n + m + n;
    let mut w = vec![vec![Cx::new(0.0, 0.0); width]; n];
    for i in 0..n {
        w[i][..n].copy_from_slice(&a[i]);
        for (j, col) in rhs.iter().enumerate() {
            w[i][n + j] = col[i];
        }
        w[i][n + m + i] = Cx::new(1.0, 0.0);
    }

    for k in 0..n {
        let mut piv = k;
        let mut best = w[k][k].norm();
        for i in k + 1..n {
            let v = w[i][k].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return Err(Error::numeric("degenerate pole configuration: singular residue system"));
        }
        w.swap(k, piv);
        let inv_piv = w[k][k].inv();
        for j in k..width {
            w[k][j] *= inv_piv;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = w[i][k];
            if f.norm() == 0.0 {
                continue;
            }
            for j in k..width {
                let sub = f * w[k][j];
                w[i][j] -= sub;
            }
        }
    }

    let columns: Vec<Vec<Cx>> = (0..m)
        .map(|j| (0..n).map(|i| w[i][n + j]).collect())
        .collect();

    let inv: Vec<Vec<Cx>> = (0..n)
        .map(|i| (0..n).map(|j| w[i][n + m + j]).collect())
        .collect();
    let cond_1 = norm_a * one_norm(&inv, n);

    for col in &columns {
        if col.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::numeric("degenerate pole configuration: non-finite solve"));
        }
    }

    Ok(DenseSolution { columns, cond_1 })
}

fn one_norm(a: &[Vec<Cx>], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn mat2_inverse_roundtrip() {
        let m = Mat2::new(c(1.0, 2.0), c(0.5, -1.0), c(0.0, 3.0), c(2.0, 0.1));
        let p = m.mul(&m.inv());
        assert!((p.m11 - c(1.0, 0.0)).norm() < 1e-14);
        assert!(p.m12.norm() < 1e-14);
        assert!(p.m21.norm() < 1e-14);
        assert!((p.m22 - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dense_solve_matches_hand_inverse() {
        // 2x2 complex system solved by hand through the adjugate.
        let a = vec![
            vec![c(2.0, 1.0), c(0.0, -1.0)],
            vec![c(1.0, 0.0), c(3.0, 2.0)],
        ];
        let rhs = vec![vec![c(1.0, 0.0), c(0.0, 1.0)]];
        let sol = solve_dense(&a, &rhs).unwrap();
        let m = Mat2::new(a[0][0], a[0][1], a[1][0], a[1][1]);
        let inv = m.inv();
        let want0 = inv.m11 * rhs[0][0] + inv.m12 * rhs[0][1];
        let want1 = inv.m21 * rhs[0][0] + inv.m22 * rhs[0][1];
        assert!((sol.columns[0][0] - want0).norm() < 1e-14);
        assert!((sol.columns[0][1] - want1).norm() < 1e-14);
        assert!(sol.cond_1 >= 1.0);
    }

    #[test]
    fn dense_solve_rejects_singular() {
        let a = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ];
        let rhs = vec![vec![c(1.0, 0.0), c(0.0, 0.0)]];
        assert!(solve_dense(&a, &rhs).is_err());
    }
}
