use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform spatial grid x_i = x_min + i*h, i = 0..n-1.
///
/// Everything downstream (quadrature, sweeps, Jost integration) assumes
/// uniformity, so the step is stored once and x_max is derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_min: f64,
    h: f64,
    n: usize,
}

impl Grid {
    /// Grid with n points spanning [x_min, x_max] inclusive. n >= 3.
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Grid> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::validation("grid endpoints must be finite"));
        }
        if n < 3 {
            return Err(Error::validation(format!("grid needs at least 3 points, got {n}")));
        }
        if x_max <= x_min {
            return Err(Error::validation("grid needs x_max > x_min"));
        }
        let h = (x_max - x_min) / (n - 1) as f64;
        Ok(Grid { x_min, h, n })
    }

    /// Grid from a target step; the step is adjusted down (never up) so
    /// that the span divides evenly.
    pub fn with_step(x_min: f64, x_max: f64, h: f64) -> Result<Grid> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::validation("grid step must be positive"));
        }
        if x_max <= x_min {
            return Err(Error::validation("grid needs x_max > x_min"));
        }
        let n = ((x_max - x_min) / h).ceil() as usize + 1;
        Grid::new(x_min, x_max, n.max(3))
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_min + self.h * (self.n - 1) as f64
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        self.x_min + self.h * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Index of the grid point closest to the midpoint of the span.
    pub fn mid_index(&self) -> usize {
        self.n / 2
    }

    /// Nearest index to a coordinate, clamped to the span.
    pub fn nearest_index(&self, x: f64) -> usize {
        let raw = ((x - self.x_min) / self.h).round();
        raw.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Sample a function on the grid.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.points().map(f).collect()
    }
}

/// Values halfway between consecutive samples of a uniformly spaced
/// series: centered cubic (-1, 9, 9, -1)/16 weights inside, one-sided
/// cubic stencils at the two edges. Exact for cubics, which keeps RK4
/// sweeps that need mid-step values at fourth order.
pub fn cubic_midpoints(e: &[f64]) -> Vec<f64> {
    let mut mid = Vec::with_capacity(e.len().saturating_sub(1));
    cubic_midpoints_into(e, &mut mid);
    mid
}

/// Same interpolation writing into a reused buffer (cleared first).
pub fn cubic_midpoints_into(e: &[f64], mid: &mut Vec<f64>) {
    let n = e.len();
    assert!(n >= 4, "midpoint interpolation needs 4 samples");
    mid.clear();
    mid.reserve(n - 1);
    for i in 0..n - 1 {
        let v = if i == 0 {
            0.3125 * e[0] + 0.9375 * e[1] - 0.3125 * e[2] + 0.0625 * e[3]
        } else if i == n - 2 {
            0.0625 * e[n - 4] - 0.3125 * e[n - 3] + 0.9375 * e[n - 2] + 0.3125 * e[n - 1]
        } else {
            (-e[i - 1] + 9.0 * e[i] + 9.0 * e[i + 1] - e[i + 2]) / 16.0
        };
        mid.push(v);
    }
}
