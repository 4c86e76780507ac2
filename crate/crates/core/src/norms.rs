//! Weighted Sobolev norm used for reflection-coefficient diagnostics:
//! the space H^{1,1} with squared norm ||f||^2 + ||f'||^2 + ||x f||^2.

use crate::{Error, Grid, Result};

/// H^{1,1} norm of real samples on a uniform grid: derivative by
/// central differences (one-sided at the two ends), integrals by the
/// trapezoid rule.
pub fn sobolev_norm_h11(f: &[f64], grid: &Grid) -> Result<f64> {
    let n = grid.len();
    if f.len() != n {
        return Err(Error::validation("sample length does not match grid"));
    }
    if n < 3 {
        return Err(Error::validation("insufficient samples"));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric("NaN in input samples"));
    }
    let h = grid.h();

    let mut df = vec![0.0; n];
    df[0] = (f[1] - f[0]) / h;
    df[n - 1] = (f[n - 1] - f[n - 2]) / h;
    for i in 1..n - 1 {
        df[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }

    let sq = |v: f64| v * v;
    let mut total = 0.0;
    for term in 0..3 {
        let val = |i: usize| -> f64 {
            match term {
                0 => sq(f[i]),
                1 => sq(df[i]),
                _ => sq(grid.x(i) * f[i]),
            }
        };
        let mut acc = 0.5 * (val(0) + val(n - 1));
        for i in 1..n - 1 {
            acc += val(i);
        }
        total += acc * h;
    }
    Ok(total.sqrt())
}
