//! Acceptance gate: one test per shipped guarantee, end to end through
//! the public API. Each test prints the measured numbers behind its
//! verdict (visible under --nocapture); cargo's own per-test line is
//! the pass/fail record.
//!
//! Runtime budgets are asserted with wall clocks. The budgets are
//! generous against measured times (the radiation ladder runs in about
//! three minutes against a ten-minute cap) so contention from parallel
//! test threads does not flip a verdict.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rmb_core::asymptotics::{
    asymptotic_profile, beta12_modulus_gamma_route, beta_coefficient, phase_constants,
    stationary_points,
};
use rmb_core::evolve::evolve;
use rmb_core::scattering::{
    direct_transform, discrete_spectrum, jost_matrix_left, modified_reflection, norming_constant,
    scattering_coefficients,
};
use rmb_core::soliton::{nsoliton_field, one_soliton_exact};
use rmb_core::{ConeSpec, Cx, Grid, ScatteringData, SpectralPair};

fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn fmt_sci(vals: &[f64]) -> String {
    vals.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")
}

/// Least-squares slope of ln(res) against ln(t).
fn loglog_slope(ts: &[f64], res: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = res.iter().map(|r| r.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    sxy / sxx
}

/// Purely reflective data r(z) = amp * exp(-(z/width)^2 + i chirp z)
/// on a symmetric grid, no discrete spectrum.
fn gaussian_reflective(mu: f64, amp: f64, width: f64, chirp: f64, span: f64, n: usize) -> ScatteringData {
    let z_grid = linspace(-span, span, n);
    let r = z_grid
        .iter()
        .map(|&z| Cx::from_polar(amp * (-(z / width) * (z / width)).exp(), chirp * z))
        .collect();
    ScatteringData { mu, z_grid, r, discrete: Vec::new(), warnings: Vec::new() }
}

/// 1. |s11|^2 + |s21|^2 = 1 and det(Jost) = 1, on a pure soliton and on
///    a reflective datum, across an 801-point spectral grid.
#[test]
fn ac1_direct_scattering_identities() {
    let clock = Instant::now();
    // h = 0.01: the determinant identity rides the sweep's own RK4
    // drift, which shrinks like h^4 and sits near 1e-10 at h = 0.02.
    let grid = Grid::new(-20.0, 20.0, 4001).unwrap();
    let zs = linspace(-4.0, 4.0, 801);

    let mut unitarity_worst: f64 = 0.0;
    let mut det_worst: f64 = 0.0;
    for amp in [2.0, 1.7] {
        let e: Vec<f64> = grid.points().map(|x| amp * sech(x)).collect();
        for &z in &zs {
            let (s11, s21) = scattering_coefficients(&e, &grid, cx(z, 0.0)).unwrap();
            unitarity_worst =
                unitarity_worst.max((s11.norm_sqr() + s21.norm_sqr() - 1.0).abs());
        }
        // Full Jost matrix is two extra sweeps per z; a coarse ladder
        // of spectral points suffices for the determinant identity.
        for &z in zs.iter().step_by(50) {
            let rows = jost_matrix_left(&e, &grid, cx(z, 0.0)).unwrap();
            for (m11, m12, m21, m22) in rows {
                det_worst = det_worst.max((m11 * m22 - m12 * m21 - 1.0).norm());
            }
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    println!(
        "AC1 unitarity defect {unitarity_worst:.3e} (<= 1e-8), \
         det defect {det_worst:.3e} (<= 1e-10), {secs:.1} s (< 30 s)"
    );
    assert!(unitarity_worst <= 1e-8);
    assert!(det_worst <= 1e-10);
    assert!(secs < 30.0);
}

/// 2. Recovered discrete spectrum of 2 sech x and 4 sech(2x) against
///    the closed-form pairs (0.5, i) and (1.0, 2i).
#[test]
fn ac2_spectrum_and_norming_reproduction() {
    let clock = Instant::now();
    let cases = [
        (2.0, 1.0, 0.5, 1.0),  // amp, inner scale, eta, c_im
        (4.0, 2.0, 1.0, 2.0),
    ];
    for (amp, scale, eta_ref, c_ref) in cases {
        let grid = Grid::new(-20.0, 20.0, 4001).unwrap();
        let e: Vec<f64> = grid.points().map(|x| amp * sech(scale * x)).collect();
        let (etas, warnings) = discrete_spectrum(&e, &grid).unwrap();
        assert!(warnings.is_empty(), "spectrum warnings: {warnings:?}");
        assert_eq!(etas.len(), 1, "expected a single bound state for {amp} sech({scale} x)");
        let (c_im, w) = norming_constant(&e, &grid, etas[0]).unwrap();
        assert!(w.is_empty(), "norming warnings: {w:?}");
        println!(
            "AC2 {amp} sech({scale} x): eta = {:.6} (ref {eta_ref}), c = {:.6} i (ref {c_ref} i)",
            etas[0], c_im
        );
        assert!((etas[0] - eta_ref).abs() <= 1e-3);
        assert!((c_im - c_ref).abs() <= 1e-3);
    }
    let secs = clock.elapsed().as_secs_f64();
    println!("AC2 runtime {secs:.1} s (< 30 s)");
    assert!(secs < 30.0);
}

/// 3. Round trip: scatter 2 sech x, rebuild the field from the
///    recovered pair by the residue solve at t in {0, 5, 10}, compare
///    with the closed form at the recovered spectral values.
#[test]
fn ac3_reflectionless_round_trip() {
    let grid = Grid::new(-20.0, 20.0, 2001).unwrap();
    let e: Vec<f64> = grid.points().map(|x| 2.0 * sech(x)).collect();
    let data = direct_transform(&e, &grid, 1.0, &linspace(-2.0, 2.0, 41)).unwrap();
    assert_eq!(data.discrete.len(), 1);
    let pair = data.discrete[0];

    let mut field_worst: f64 = 0.0;
    let mut bloch_worst: f64 = 0.0;
    for t in [0.0, 5.0, 10.0] {
        let field = nsoliton_field(&data.discrete, None, &grid, t, 1.0).unwrap();
        bloch_worst = bloch_worst.max(field.bloch_norm_defect());
        for (i, x) in grid.points().enumerate() {
            let exact = one_soliton_exact(pair.eta, pair.c_im, 1.0, x, t).unwrap();
            field_worst = field_worst
                .max((field.e[i] - exact.e).abs())
                .max((field.s[i] - exact.s).abs())
                .max((field.u[i] - exact.u).abs())
                .max((field.r[i] - exact.r).abs());
        }
    }
    println!(
        "AC3 recovered pair ({:.6}, {:.6} i); round-trip sup {field_worst:.3e} (<= 1e-6), \
         Bloch defect {bloch_worst:.3e} (<= 1e-12)",
        pair.eta, pair.c_im
    );
    assert!(field_worst <= 1e-6);
    assert!(bloch_worst <= 1e-12);
}

/// 4. The integrator against the closed-form soliton to t = 10 at the
///    contract resolution, plus an observed spatial convergence order.
#[test]
fn ac4_pde_oracle_agreement() {
    let clock = Instant::now();
    // The right edge must sit in true vacuum: the sweep anchors the
    // ground state at x_max, and the tail value there (2 sech(x_max))
    // becomes a resolution-independent error floor.
    let run = |h: f64, dt: f64| -> f64 {
        let grid = Grid::with_step(-30.0, 20.0, h).unwrap();
        let e0: Vec<f64> = grid.points().map(|x| 2.0 * sech(x)).collect();
        let ev = evolve(&e0, &grid, 1.0, &[10.0], dt).unwrap();
        assert!(ev.warnings.is_empty(), "evolution warnings: {:?}", ev.warnings);
        let f = &ev.snapshots[0];
        let mut worst: f64 = 0.0;
        for (i, x) in grid.points().enumerate() {
            let exact = one_soliton_exact(0.5, 1.0, 1.0, x, 10.0).unwrap();
            worst = worst
                .max((f.e[i] - exact.e).abs())
                .max((f.s[i] - exact.s).abs())
                .max((f.u[i] - exact.u).abs())
                .max((f.r[i] - exact.r).abs());
        }
        worst
    };

    let contract = run(0.02, 0.01);
    // Order probe at a small step in t so the spatial error dominates.
    let coarse = run(0.04, 0.0025);
    let fine = run(0.02, 0.0025);
    let order = (coarse / fine).log2();
    let secs = clock.elapsed().as_secs_f64();
    println!(
        "AC4 sup error {contract:.3e} (<= 2e-3); order {order:.2} (>= 3) \
         from {coarse:.3e} -> {fine:.3e}; {secs:.1} s (< 120 s)"
    );
    assert!(contract <= 2e-3);
    assert!(order >= 3.0);
    assert!(secs < 120.0);
}

/// 5. Stationary points and phase constants at 50 random rays in the
///    soliton region: quartic residuals, bounds, and |delta0A| = 1.
#[test]
fn ac5_stationary_point_and_constant_identities() {
    let quartic_residual = |mu: f64, v: f64, z_sq: f64| -> f64 {
        let y = 4.0 * z_sq;
        let m2 = mu * mu;
        let value = v * (y - m2) * (y - m2) + y + m2;
        let scale = 1.0 + v.abs() * (y - m2) * (y - m2) + y.abs() + m2;
        value.abs() / scale
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x4143_3035);
    let mut quartic_worst: f64 = 0.0;
    let mut modulus_worst: f64 = 0.0;
    for trial in 0..50 {
        let mu: f64 = rng.gen_range(0.3..=1.0);
        let v = -rng.gen_range(0.02..0.95) / (mu * mu);
        let sp = stationary_points(mu, v).unwrap();
        quartic_worst = quartic_worst
            .max(quartic_residual(mu, v, sp.zeta0 * sp.zeta0))
            .max(quartic_residual(mu, v, -sp.zeta1.im * sp.zeta1.im));
        assert!(sp.zeta0 > 3.0f64.sqrt() * mu / 2.0, "zeta0 bound at ({mu}, {v})");
        assert!(sp.zeta1.norm() < mu / 2.0, "zeta1 bound at ({mu}, {v})");
        assert!(beta_coefficient(sp.zeta0, mu) > 0.0);

        // zeta0 stays below 4 on this v range, inside the sample span.
        let data = gaussian_reflective(mu, 0.6, 1.4, 0.4, 8.0, 1601);
        let t = rng.gen_range(1.0..50.0);
        let triangle: &[f64] = if trial % 2 == 0 { &[] } else { &[0.6, 1.1] };
        let pc = phase_constants(&data, mu, v, t, triangle).unwrap();
        modulus_worst = modulus_worst.max((pc.delta0a.norm() - 1.0).abs());
    }
    println!(
        "AC5 quartic residual {quartic_worst:.3e} (<= 1e-12), \
         |delta0A| - 1 worst {modulus_worst:.3e} (<= 1e-10)"
    );
    assert!(quartic_worst <= 1e-12);
    assert!(modulus_worst <= 1e-10);
}

/// 6. The Gamma-function route to |beta12| equals sqrt|nu| across
///    reflection magnitudes.
#[test]
fn ac6_gamma_route_modulus_identity() {
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let r_abs = 0.1 + 2.9 * i as f64 / 19.0;
        let nu = -(1.0 + r_abs * r_abs).ln() / (2.0 * std::f64::consts::PI);
        let gamma_route = beta12_modulus_gamma_route(r_abs);
        worst = worst.max((gamma_route - nu.abs().sqrt()).abs());
    }
    println!("AC6 gamma-route vs sqrt|nu| worst {worst:.3e} (<= 1e-8)");
    assert!(worst <= 1e-8);
}

/// 7. A two-soliton field seen through a cone around v = -1/2: inside
///    the cone the slow soliton is gone up to its decaying tail and the
///    fast one appears with the crossing-shifted phase.
#[test]
fn ac7_soliton_resolution_in_cone() {
    let pairs =
        [SpectralPair { eta: 0.5, c_im: 1.0 }, SpectralPair { eta: 1.0, c_im: 2.0 }];
    let data = ScatteringData {
        mu: 1.0,
        z_grid: linspace(-3.0, 3.0, 61),
        r: vec![cx(0.0, 0.0); 61],
        discrete: pairs.to_vec(),
        warnings: Vec::new(),
    };
    // v2 = -0.46 keeps the slice's trailing edge a little farther from
    // the slow soliton; its tail is what limits the match below.
    let cone = ConeSpec::new(-3.5, 0.5, -0.55, -0.46, 1.0).unwrap();

    let mut other_tail = Vec::new();
    let mut match_sup = Vec::new();
    for t in [20.0, 40.0] {
        let (lo, hi) = cone.slice(t);
        let slice = Grid::new(lo + 0.01, hi - 0.01, 401).unwrap();
        let sim = nsoliton_field(&pairs, None, &slice, t, 1.0).unwrap();
        let xs: Vec<f64> = slice.points().collect();
        let pred = asymptotic_profile(&data, &cone, &xs, t).unwrap();

        let mut worst: f64 = 0.0;
        let mut tail: f64 = 0.0;
        for (i, p) in pred.iter().enumerate() {
            worst = worst
                .max((sim.e[i] - p.leading.e).abs())
                .max((sim.s[i] - p.leading.s).abs())
                .max((sim.u[i] - p.leading.u).abs())
                .max((sim.r[i] - p.leading.r).abs());
            let dropped = one_soliton_exact(1.0, 2.0, 1.0, xs[i], t).unwrap();
            tail = tail.max(dropped.e.abs());
        }
        match_sup.push(worst);
        other_tail.push(tail);
    }
    println!(
        "AC7 cone match sup {:.3e} / {:.3e} at t = 20 / 40 (<= 1e-3); \
         other-soliton tail {:.3e} -> {:.3e} (>= 10x drop)",
        match_sup[0], match_sup[1], other_tail[0], other_tail[1]
    );
    assert!(match_sup[0] <= 1e-3 && match_sup[1] <= 1e-3);
    assert!(other_tail[1] < other_tail[0]);
    assert!(other_tail[1] <= other_tail[0] / 10.0);
}

/// 8. Radiation decay on a reflective datum: inside a cone holding the
///    single soliton, the first residual falls like t^{-1/2} and adding
///    the radiation term makes it fall strictly faster.
#[test]
fn ac8_radiation_decay_slopes() {
    let clock = Instant::now();
    let mu = 0.6;
    let grid = Grid::with_step(-300.0, 30.0, 0.01).unwrap();
    let e0: Vec<f64> = grid.points().map(|x| 1.7 * sech(x)).collect();
    let data = direct_transform(&e0, &grid, mu, &linspace(-4.0, 4.0, 801)).unwrap();
    // The cone carries the lone eta = 0.35 soliton at v = -1/0.85.
    let cone = ConeSpec::new(-0.5, 0.5, -1.4, -1.0, mu).unwrap();

    let times = [25.0, 50.0, 100.0, 200.0];
    let ev = evolve(&e0, &grid, mu, &times, 0.005).unwrap();
    // Fast radiation exits the window on the left before t = 200; that
    // is by design and harmless, since every sample depends only on the
    // field to its right. Only the right edge (the sweep anchor) must
    // stay at the ground state.
    assert!(
        ev.warnings.iter().all(|w| w.contains("left edge")),
        "evolution warnings: {:?}",
        ev.warnings
    );

    let mut lead_res = Vec::new();
    let mut corr_res = Vec::new();
    for (snap, &t) in ev.snapshots.iter().zip(&times) {
        let (lo, hi) = cone.slice(t);
        let mut idx: Vec<usize> = (0..grid.len())
            .filter(|&i| grid.x(i) > lo && grid.x(i) < hi)
            .collect();
        let stride = (idx.len() / 300).max(1);
        idx = idx.into_iter().step_by(stride).collect();
        let xs: Vec<f64> = idx.iter().map(|&i| grid.x(i)).collect();
        let pred = asymptotic_profile(&data, &cone, &xs, t).unwrap();
        let mut lead: f64 = 0.0;
        let mut corr: f64 = 0.0;
        for (&i, p) in idx.iter().zip(&pred) {
            lead = lead.max((snap.e[i] - p.leading.e).abs());
            corr = corr.max((snap.e[i] - p.leading.e - p.radiation).abs());
        }
        lead_res.push(lead);
        corr_res.push(corr);
    }
    let slope_lead = loglog_slope(&times, &lead_res);
    let slope_corr = loglog_slope(&times, &corr_res);
    let secs = clock.elapsed().as_secs_f64();
    println!(
        "AC8 leading residuals [{}] slope {slope_lead:.3} (-0.5 +- 0.15); \
         corrected [{}] slope {slope_corr:.3} (<= -0.6); {secs:.0} s (< 600 s)",
        fmt_sci(&lead_res),
        fmt_sci(&corr_res)
    );
    assert!((-0.65..=-0.35).contains(&slope_lead));
    assert!(slope_corr <= -0.6);
    assert!(secs < 600.0);
}

/// 9. Dressed reflection on the deformed contour: pointwise match with
///    the closed-form arc decay and a monotone arc maximum as the
///    radius shrinks.
#[test]
fn ac9_modified_reflection_arc_decay() {
    let mu = 1.0;
    let t = 1.0;
    let data = gaussian_reflective(mu, 0.5, 1.0, 0.3, 4.0, 1601);

    let mut arc_max = Vec::new();
    let mut pointwise_worst: f64 = 0.0;
    for kappa in [0.2, 0.1, 0.05] {
        let mc = modified_reflection(&data, t, kappa, 181).unwrap();
        let mut arc_sup: f64 = 0.0;
        for (z, r) in mc.z.iter().zip(&mc.r) {
            if z.im <= 0.0 {
                continue; // axis samples, dressing is a pure phase there
            }
            let center = if z.re > 0.0 { mu / 2.0 } else { -mu / 2.0 };
            let cos_a = (z.re - center) / kappa;
            let sin_a = z.im / kappa;
            let sign = if center > 0.0 { 1.0 } else { -1.0 };
            let denom = kappa * kappa + sign * 2.0 * mu * kappa * cos_a + mu * mu;
            let decay =
                (-t * sin_a / (4.0 * kappa) * (1.0 + kappa * kappa / denom)).exp();
            let closed = data.sample_r(z.re).unwrap().norm() * decay;
            pointwise_worst = pointwise_worst.max((r.norm() - closed).abs());
            arc_sup = arc_sup.max(r.norm());
        }
        arc_max.push(arc_sup);
    }
    println!(
        "AC9 closed-form defect {pointwise_worst:.3e} (<= 1e-6); \
         arc maxima {arc_max:.4?} strictly decreasing over kappa 0.2, 0.1, 0.05"
    );
    assert!(pointwise_worst <= 1e-6);
    assert!(arc_max[0] > arc_max[1] && arc_max[1] > arc_max[2]);
}
