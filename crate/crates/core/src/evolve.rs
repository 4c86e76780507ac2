//! Time stepping for the sharp-line reduced Maxwell-Bloch system.
//!
//! The medium carries no time derivative of its own: at every instant
//! (s, u, r) solve the spatial system
//!
//!   s_x = E u + mu r,   u_x = -E s,   r_x = -mu s
//!
//! anchored at the ground state (0, -1, 0), and the field then
//! advances by E_t = -s. The coefficient matrix of the sweep is
//! antisymmetric, so the exact flow keeps (s, u, r) on the unit
//! sphere; RK4 drift off the sphere is the accuracy monitor.
//!
//! The anchoring side decides stability. Around the ground state the
//! slaved field obeys E_t(x) = -int cos(mu (x - y)) E(y) dy over the
//! anchored side, a Volterra feedback loop whose spatial frequency mu
//! is resonant (these are the z = +-mu/2 singularities of the spectral
//! problem). Anchored on the left, the resonant band grows like
//! I_0(sqrt(2 t (x - x_min))): float noise saturates to O(1) ringing
//! within t ~ 20 on an 80-unit domain. Anchored on the right the same
//! band rings down (J_0), because ground-state atoms absorb at
//! resonance; noise stays at seed level. On a true solution of the
//! Cauchy problem both anchorings agree to the size of the field's
//! tail at the anchor, since the exact medium returns to ground state
//! on both sides. The time integrator therefore sweeps from x_max
//! leftward, while [`bloch_sweep`] keeps the left-anchored convention
//! as a one-shot diagnostic (no feedback, so no growth).
//!
//! A time step is classical RK4 in t where each stage runs a full
//! sweep of the instantaneous field. Everything in this system travels
//! left: the right edge stays quiescent on its own, and a pulse
//! reaching the left edge means the recorded window no longer contains
//! the solution, which `evolve` reports as a warning rather than an
//! error. Field at the right edge above noise breaks the anchoring
//! assumption and also warns.

use crate::field::{bloch_norm_defect, SpatialField};
use crate::grid::{cubic_midpoints_into, Grid};
use crate::{Error, Result};

/// Leading grid points watched for field touching the left edge.
const EDGE_POINTS: usize = 10;
/// Edge warning threshold relative to the initial field amplitude.
const EDGE_WARN_REL: f64 = 1e-3;

#[inline]
fn medium_rhs(e: f64, mu: f64, v: [f64; 3]) -> [f64; 3] {
    [e * v[1] + mu * v[2], -e * v[0], -mu * v[0]]
}

#[inline]
fn advanced(v: [f64; 3], a: f64, k: [f64; 3]) -> [f64; 3] {
    [v[0] + a * k[0], v[1] + a * k[1], v[2] + a * k[2]]
}

/// One RK4 cell of the medium system; e0, em, e1 are the field at the
/// left node, the midpoint and the right node.
#[inline]
fn medium_cell(v: [f64; 3], e0: f64, em: f64, e1: f64, h: f64, mu: f64) -> [f64; 3] {
    let k1 = medium_rhs(e0, mu, v);
    let k2 = medium_rhs(em, mu, advanced(v, 0.5 * h, k1));
    let k3 = medium_rhs(em, mu, advanced(v, 0.5 * h, k2));
    let k4 = medium_rhs(e1, mu, advanced(v, h, k3));
    [
        v[0] + h / 6.0 * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0]),
        v[1] + h / 6.0 * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1]),
        v[2] + h / 6.0 * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2]),
    ]
}

fn validate(e: &[f64], grid: &Grid, mu: f64) -> Result<()> {
    if e.len() != grid.len() {
        return Err(Error::validation("field length does not match grid"));
    }
    if e.len() < 4 {
        return Err(Error::validation("sweep needs at least 4 grid points"));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::validation("mu must be positive"));
    }
    if e.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric("non-finite field sample"));
    }
    Ok(())
}

/// Medium response to the instantaneous field: (s, u, r) at every grid
/// point, integrated from the ground state at x_min.
pub fn bloch_sweep(e: &[f64], grid: &Grid, mu: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    validate(e, grid, mu)?;
    let mut mid = Vec::new();
    cubic_midpoints_into(e, &mut mid);
    let n = e.len();
    let (mut s, mut u, mut r) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    u[0] = -1.0;
    let mut v = [0.0, -1.0, 0.0];
    for i in 0..n - 1 {
        v = medium_cell(v, e[i], mid[i], e[i + 1], grid.h(), mu);
        s[i + 1] = v[0];
        u[i + 1] = v[1];
        r[i + 1] = v[2];
    }
    Ok((s, u, r))
}

/// s only, anchored at the right edge (the stable direction for the
/// feedback loop; see the module docs), written into a reused buffer.
fn sweep_s(e: &[f64], mid: &[f64], h: f64, mu: f64, s: &mut [f64]) {
    let n = e.len();
    let mut v = [0.0, -1.0, 0.0];
    s[n - 1] = 0.0;
    for i in (0..n - 1).rev() {
        v = medium_cell(v, e[i + 1], mid[i], e[i], -h, mu);
        s[i] = v[0];
    }
}

/// Full right-anchored medium state, matching the s that drives the
/// time stepping.
fn medium_sweep_rev(e: &[f64], mid: &[f64], h: f64, mu: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = e.len();
    let (mut s, mut u, mut r) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    u[n - 1] = -1.0;
    let mut v = [0.0, -1.0, 0.0];
    for i in (0..n - 1).rev() {
        v = medium_cell(v, e[i + 1], mid[i], e[i], -h, mu);
        s[i] = v[0];
        u[i] = v[1];
        r[i] = v[2];
    }
    (s, u, r)
}

struct StepWorkspace {
    stage: Vec<f64>,
    mid: Vec<f64>,
    s1: Vec<f64>,
    s2: Vec<f64>,
    s3: Vec<f64>,
    s4: Vec<f64>,
}

impl StepWorkspace {
    fn new(n: usize) -> Self {
        StepWorkspace {
            stage: vec![0.0; n],
            mid: Vec::with_capacity(n - 1),
            s1: vec![0.0; n],
            s2: vec![0.0; n],
            s3: vec![0.0; n],
            s4: vec![0.0; n],
        }
    }
}

/// One RK4 step of E_t = -s[E], one full medium sweep per stage.
fn time_step(e: &mut [f64], h: f64, mu: f64, dt: f64, ws: &mut StepWorkspace) {
    let n = e.len();
    cubic_midpoints_into(e, &mut ws.mid);
    sweep_s(e, &ws.mid, h, mu, &mut ws.s1);
    for i in 0..n {
        ws.stage[i] = e[i] - 0.5 * dt * ws.s1[i];
    }
    cubic_midpoints_into(&ws.stage, &mut ws.mid);
    sweep_s(&ws.stage, &ws.mid, h, mu, &mut ws.s2);
    for i in 0..n {
        ws.stage[i] = e[i] - 0.5 * dt * ws.s2[i];
    }
    cubic_midpoints_into(&ws.stage, &mut ws.mid);
    sweep_s(&ws.stage, &ws.mid, h, mu, &mut ws.s3);
    for i in 0..n {
        ws.stage[i] = e[i] - dt * ws.s3[i];
    }
    cubic_midpoints_into(&ws.stage, &mut ws.mid);
    sweep_s(&ws.stage, &ws.mid, h, mu, &mut ws.s4);
    for i in 0..n {
        e[i] -= dt / 6.0 * (ws.s1[i] + 2.0 * (ws.s2[i] + ws.s3[i]) + ws.s4[i]);
    }
}

/// One field snapshot per requested time plus run diagnostics.
#[derive(Debug)]
pub struct Evolution {
    pub snapshots: Vec<SpatialField>,
    /// Largest Bloch-sphere defect across snapshot sweeps.
    pub bloch_defect_max: f64,
    /// Largest |E| seen near the left edge over the whole run.
    pub left_boundary_max: f64,
    /// Largest |E| seen near the right edge (the sweep anchor).
    pub right_boundary_max: f64,
    pub warnings: Vec<String>,
}

/// Evolve the field from t = 0, landing on every snapshot time exactly.
/// Between snapshots the interval is split evenly into steps no longer
/// than `dt_max`.
pub fn evolve(
    e0: &[f64],
    grid: &Grid,
    mu: f64,
    snapshot_times: &[f64],
    dt_max: f64,
) -> Result<Evolution> {
    validate(e0, grid, mu)?;
    if !(dt_max.is_finite() && dt_max > 0.0) {
        return Err(Error::validation("dt_max must be positive"));
    }
    if snapshot_times.is_empty() {
        return Err(Error::validation("need at least one snapshot time"));
    }
    if snapshot_times.iter().any(|t| !t.is_finite()) {
        return Err(Error::validation("snapshot times must be finite"));
    }
    if snapshot_times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation("snapshot times must be strictly increasing"));
    }

    let n = grid.len();
    let h = grid.h();
    let edge = n.min(EDGE_POINTS);
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |a, &x| a.max(x.abs()));

    let mut e = e0.to_vec();
    let mut ws = StepWorkspace::new(n);
    let mut t = 0.0;
    let e0_max = max_abs(e0);
    let mut left_max = max_abs(&e0[..edge]);
    let mut right_max = max_abs(&e0[n - edge..]);
    let mut snapshots = Vec::with_capacity(snapshot_times.len());
    let mut defect_max = 0.0f64;

    for &t_snap in snapshot_times {
        let delta = t_snap - t;
        if delta != 0.0 {
            let steps = (delta.abs() / dt_max).ceil().max(1.0) as usize;
            let dt = delta / steps as f64;
            for _ in 0..steps {
                time_step(&mut e, h, mu, dt, &mut ws);
                left_max = left_max.max(max_abs(&e[..edge]));
                right_max = right_max.max(max_abs(&e[n - edge..]));
            }
        }
        t = t_snap;
        if e.iter().any(|v| !v.is_finite()) {
            return Err(Error::numeric(format!("field lost finiteness before t = {t_snap}")));
        }
        cubic_midpoints_into(&e, &mut ws.mid);
        let (s, u, r) = medium_sweep_rev(&e, &ws.mid, h, mu);
        defect_max = defect_max.max(bloch_norm_defect(&s, &u, &r));
        snapshots.push(SpatialField::new(grid.clone(), t_snap, e.clone(), s, u, r)?);
    }

    let mut warnings = Vec::new();
    if e0_max > 0.0 && left_max > EDGE_WARN_REL * e0_max {
        warnings.push(format!(
            "field reached the left edge (|E| up to {left_max:.3e} within {edge} points of x_min); \
             the recorded window no longer contains the full solution"
        ));
    }
    if e0_max > 0.0 && right_max > EDGE_WARN_REL * e0_max {
        warnings.push(format!(
            "field reached the right edge (|E| up to {right_max:.3e} within {edge} points of x_max); \
             the ground-state anchoring of the sweep no longer holds"
        ));
    }
    Ok(Evolution {
        snapshots,
        bloch_defect_max: defect_max,
        left_boundary_max: left_max,
        right_boundary_max: right_max,
        warnings,
    })
}
