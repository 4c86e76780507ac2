use crate::{Error, Grid, Result};

/// The four physical fields sampled on a grid at a common time.
///
/// Invariants the constructors enforce and the evolution maintains:
/// equal sample counts, finite entries, Bloch defect below the caller's
/// tolerance, boundary columns near the ground state (0, 0, -1).
#[derive(Debug, Clone)]
pub struct SpatialField {
    pub grid: Grid,
    pub t: f64,
    pub e: Vec<f64>,
    pub s: Vec<f64>,
    pub u: Vec<f64>,
    pub r: Vec<f64>,
}

impl SpatialField {
    pub fn new(grid: Grid, t: f64, e: Vec<f64>, s: Vec<f64>, u: Vec<f64>, r: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        if e.len() != n || s.len() != n || u.len() != n || r.len() != n {
            return Err(Error::validation("field component length does not match grid"));
        }
        for v in e.iter().chain(&s).chain(&u).chain(&r) {
            if !v.is_finite() {
                return Err(Error::numeric("non-finite field sample"));
            }
        }
        Ok(SpatialField { grid, t, e, s, u, r })
    }

    /// Ground state E = 0, (s, u, r) = (0, -1, 0 = r).
    pub fn ground(grid: Grid, t: f64) -> Self {
        let n = grid.len();
        SpatialField {
            grid,
            t,
            e: vec![0.0; n],
            s: vec![0.0; n],
            u: vec![-1.0; n],
            r: vec![0.0; n],
        }
    }

    /// max_i |r_i^2 + s_i^2 + u_i^2 - 1|.
    pub fn bloch_norm_defect(&self) -> f64 {
        bloch_norm_defect(&self.s, &self.u, &self.r)
    }

    /// Largest deviation of the two boundary columns from the ground
    /// state, across all four fields.
    pub fn boundary_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in [0, self.grid.len() - 1] {
            worst = worst
                .max(self.e[i].abs())
                .max(self.s[i].abs())
                .max((self.u[i] + 1.0).abs())
                .max(self.r[i].abs());
        }
        worst
    }
}

/// Pointwise Bloch-sphere defect max_i |r^2 + s^2 + u^2 - 1|.
pub fn bloch_norm_defect(s: &[f64], u: &[f64], r: &[f64]) -> f64 {
    assert!(s.len() == u.len() && u.len() == r.len(), "component length mismatch");
    s.iter()
        .zip(u)
        .zip(r)
        .map(|((&s, &u), &r)| (r * r + s * s + u * u - 1.0).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_is_clean() {
        let g = Grid::new(-5.0, 5.0, 11).unwrap();
        let f = SpatialField::ground(g, 0.0);
        assert_eq!(f.bloch_norm_defect(), 0.0);
        assert_eq!(f.boundary_defect(), 0.0);
    }

    #[test]
    fn defect_matches_hand_value() {
        // (s, u, r) = (0.6, 0.8, 0.1): 0.36 + 0.64 + 0.01 = 1.01.
        let d = bloch_norm_defect(&[0.6], &[0.8], &[0.1]);
        assert!((d - 0.01).abs() < 1e-15);
    }

    #[test]
    fn length_mismatch_rejected() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        let bad = SpatialField::new(g, 0.0, vec![0.0; 3], vec![0.0; 2], vec![-1.0; 3], vec![0.0; 3]);
        assert!(bad.is_err());
    }

    #[test]
    fn non_finite_rejected() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        let bad = SpatialField::new(
            g,
            0.0,
            vec![0.0, f64::NAN, 0.0],
            vec![0.0; 3],
            vec![-1.0; 3],
            vec![0.0; 3],
        );
        assert!(bad.is_err());
    }
}
