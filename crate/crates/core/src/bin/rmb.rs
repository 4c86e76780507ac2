//! Command-line driver. Each verb reads a flat key=value config
//! (overridable with --set), writes its outputs plus a JSON manifest
//! into --out, and prints a one-screen summary. Exit codes: 0 ok,
//! 2 validation, 3 numeric.

use clap::{Args, Parser, Subcommand};
use rmb_core::asymptotics::{
    beta12_modulus_gamma_route, cone_interval, stationary_points,
};
use rmb_core::scattering::{
    direct_transform, jost_matrix_left, modified_reflection, scattering_coefficients,
};
use rmb_core::soliton::{nsoliton_field, one_soliton_exact};
use rmb_core::{io, Config, ConeSpec, Cx, Error, Grid, Result, ScatteringData, SpectralPair};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "rmb", about = "Inverse-scattering toolkit for the reduced Maxwell-Bloch system")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Direct scattering transform of an initial field
    Scatter(Common),
    /// Reflectionless N-soliton snapshots from given spectral pairs
    Solitons(Common),
    /// Long-time cone predictions from scattering data
    Asymptotics(Common),
    /// Method-of-lines evolution of an initial field
    Evolve(Common),
    /// Evolution vs asymptotic prediction with residual decay slopes
    Compare(Common),
    /// Fast internal identity checks
    Selfcheck(Common),
}

#[derive(Args)]
struct Common {
    /// key=value config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (created if missing)
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override a config key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    if let Err(e) = run(cli.verb) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}

fn run(verb: Verb) -> std::result::Result<(), Error> {
    let (name, common): (&str, &Common) = match &verb {
        Verb::Scatter(c) => ("scatter", c),
        Verb::Solitons(c) => ("solitons", c),
        Verb::Asymptotics(c) => ("asymptotics", c),
        Verb::Evolve(c) => ("evolve", c),
        Verb::Compare(c) => ("compare", c),
        Verb::Selfcheck(c) => ("selfcheck", c),
    };
    let mut cfg = match &common.config {
        Some(path) => Config::load(path)?,
        None => Config::new(),
    };
    for spec in &common.set {
        cfg.set_override(spec)?;
    }
    std::fs::create_dir_all(&common.out)
        .map_err(|e| Error::validation(format!("cannot create {}: {e}", common.out.display())))?;

    let outputs = match &verb {
        Verb::Scatter(_) => run_scatter(&cfg, &common.out)?,
        Verb::Solitons(_) => run_solitons(&cfg, &common.out)?,
        Verb::Asymptotics(_) => run_asymptotics(&cfg, &common.out)?,
        Verb::Evolve(_) => run_evolve(&cfg, &common.out)?,
        Verb::Compare(_) => run_compare(&cfg, &common.out)?,
        Verb::Selfcheck(_) => run_selfcheck(&cfg)?,
    };

    let manifest = common.out.join(format!("{name}_manifest.json"));
    io::write_manifest(name, &cfg, &outputs, &manifest)?;
    Ok(())
}

const GRID_KEYS: [&str; 3] = ["grid.x_min", "grid.x_max", "grid.h"];
const DATUM_KEYS: [&str; 5] = [
    "datum.kind",
    "datum.amplitude",
    "datum.width",
    "datum.center",
    "datum.path",
];

fn build_grid(cfg: &Config) -> Result<Grid> {
    let x_min = cfg.f64_or("grid.x_min", -40.0)?;
    let x_max = cfg.f64_or("grid.x_max", 40.0)?;
    let h = cfg.positive_or("grid.h", 0.02)?;
    Grid::with_step(x_min, x_max, h)
}

/// Initial field on the grid: builtin zero / sech family, or a
/// samples file interpolated linearly (zero outside its span).
fn build_datum(cfg: &Config, grid: &Grid) -> Result<Vec<f64>> {
    match cfg.str_or("datum.kind", "sech") {
        "zero" => Ok(vec![0.0; grid.len()]),
        "sech" => {
            let a = cfg.f64_or("datum.amplitude", 2.0)?;
            let w = cfg.positive_or("datum.width", 1.0)?;
            let x0 = cfg.f64_or("datum.center", 0.0)?;
            Ok(grid.sample(|x| a / ((x - x0) / w).cosh()))
        }
        "samples" => {
            let path = cfg
                .get_str("datum.path")
                .ok_or_else(|| Error::validation("datum.kind = samples needs datum.path"))?;
            let (xs, es) = io::read_samples_csv(Path::new(path))?;
            Ok(grid
                .points()
                .map(|x| {
                    if x <= xs[0] || x >= xs[xs.len() - 1] {
                        return 0.0;
                    }
                    let i = xs.partition_point(|&v| v < x).max(1);
                    let w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
                    es[i - 1] * (1.0 - w) + es[i] * w
                })
                .collect())
        }
        other => Err(Error::validation(format!(
            "datum.kind '{other}' not recognized (zero | sech | samples)"
        ))),
    }
}

fn zgrid(cfg: &Config) -> Result<Vec<f64>> {
    let z_max = cfg.positive_or("zgrid.z_max", 8.0)?;
    let n = cfg.usize_or("zgrid.n", 801)?;
    if n < 2 {
        return Err(Error::validation("zgrid.n must be at least 2"));
    }
    Ok((0..n)
        .map(|i| -z_max + 2.0 * z_max * i as f64 / (n - 1) as f64)
        .collect())
}

fn times_or(cfg: &Config, default: &[f64]) -> Result<Vec<f64>> {
    let ts = cfg.f64_list("times")?.unwrap_or_else(|| default.to_vec());
    if ts.is_empty() {
        return Err(Error::validation("times must not be empty"));
    }
    Ok(ts)
}

fn cone_from(cfg: &Config, mu: f64) -> Result<ConeSpec> {
    ConeSpec::new(
        cfg.require_f64("cone.x1")?,
        cfg.require_f64("cone.x2")?,
        cfg.require_f64("cone.v1")?,
        cfg.require_f64("cone.v2")?,
        mu,
    )
}

fn spectral_pairs(cfg: &Config) -> Result<Vec<SpectralPair>> {
    let etas = cfg
        .f64_list("soliton.eta")?
        .ok_or_else(|| Error::validation("config key 'soliton.eta' is required"))?;
    let cs = cfg
        .f64_list("soliton.c")?
        .ok_or_else(|| Error::validation("config key 'soliton.c' is required"))?;
    if etas.len() != cs.len() {
        return Err(Error::validation("soliton.eta and soliton.c must have equal length"));
    }
    Ok(etas
        .iter()
        .zip(&cs)
        .map(|(&eta, &c_im)| SpectralPair { eta, c_im })
        .collect())
}

fn run_scatter(cfg: &Config, out: &Path) -> Result<Vec<String>> {
    let mut known = vec!["mu", "zgrid.z_max", "zgrid.n"];
    known.extend(GRID_KEYS);
    known.extend(DATUM_KEYS);
    cfg.check_known(&known)?;

    let grid = build_grid(cfg)?;
    let e0 = build_datum(cfg, &grid)?;
    let mu = cfg.positive_or("mu", 1.0)?;
    let zs = zgrid(cfg)?;

    let data = direct_transform(&e0, &grid, mu, &zs)?;
    let json = out.join("scattering.json");
    io::write_scattering(&data, &json)?;

    // Per-z identity defects: |s11|^2 + |s21|^2 - 1 and max |det m - 1|.
    let diag = out.join("scatter_diagnostics.csv");
    let _ = std::fs::remove_file(&diag);
    let mut max_unit = 0.0f64;
    let mut max_det = 0.0f64;
    for &z in &zs {
        let (s11, s21) = scattering_coefficients(&e0, &grid, Cx::new(z, 0.0))?;
        let unit = (s11.norm_sqr() + s21.norm_sqr() - 1.0).abs();
        let det = jost_matrix_left(&e0, &grid, Cx::new(z, 0.0))?
            .iter()
            .map(|&(a, b, c, d)| ((a * d - b * c) - Cx::new(1.0, 0.0)).norm())
            .fold(0.0f64, f64::max);
        io::append_diagnostics_row(&diag, "z,unitarity_defect,det_defect", &[z, unit, det])?;
        max_unit = max_unit.max(unit);
        max_det = max_det.max(det);
    }

    let r_max = data.r.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    println!(
        "scatter: {} discrete pair(s), max |r| = {r_max:.3e}, unitarity defect {max_unit:.3e}, det defect {max_det:.3e}",
        data.discrete.len()
    );
    for p in &data.discrete {
        println!("  eta = {:.6}, c = {:.6}i", p.eta, p.c_im);
    }
    for w in &data.warnings {
        println!("  warning: {w}");
    }
    Ok(vec!["scattering.json".into(), "scatter_diagnostics.csv".into()])
}

fn run_solitons(cfg: &Config, out: &Path) -> Result<Vec<String>> {
    let mut known = vec!["mu", "soliton.eta", "soliton.c", "times"];
    known.extend(GRID_KEYS);
    cfg.check_known(&known)?;

    let grid = build_grid(cfg)?;
    let mu = cfg.positive_or("mu", 1.0)?;
    let pairs = spectral_pairs(cfg)?;
    let times = times_or(cfg, &[0.0])?;

    let mut outputs = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        let field = nsoliton_field(&pairs, None, &grid, t, mu)?;
        let name = format!("solitons_{i:02}.csv");
        io::write_field_csv(&field, mu, &out.join(&name))?;
        let e_max = field.e.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        println!(
            "solitons: t = {t}, max |E| = {e_max:.6}, Bloch defect = {:.3e} -> {name}",
            field.bloch_norm_defect()
        );
        outputs.push(name);
    }
    Ok(outputs)
}

/// Scattering data for the asymptotics verb: a JSON file, or pure
/// pole data (r = 0 on a token grid) built from soliton.eta/c.
fn asymptotic_data(cfg: &Config) -> Result<ScatteringData> {
    match cfg.get_str("input.scattering") {
        Some(path) => {
            if cfg.contains("soliton.eta") || cfg.contains("soliton.c") {
                return Err(Error::validation(
                    "give either input.scattering or soliton.eta/soliton.c, not both",
                ));
            }
            let data = io::read_scattering(Path::new(path))?;
            if let Some(mu) = cfg.f64("mu")? {
                if (mu - data.mu).abs() > 1e-12 {
                    return Err(Error::validation(format!(
                        "config mu = {mu} does not match scattering file mu = {}",
                        data.mu
                    )));
                }
            }
            Ok(data)
        }
        None => {
            let mu = cfg.positive_or("mu", 1.0)?;
            let pairs = spectral_pairs(cfg)?;
            let z_grid: Vec<f64> = (0..61).map(|i| -3.0 + 0.1 * i as f64).collect();
            let n = z_grid.len();
            Ok(ScatteringData {
                mu,
                z_grid,
                r: vec![Cx::new(0.0, 0.0); n],
                discrete: pairs,
                warnings: Vec::new(),
            })
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// The asymptotic formula evaluates on rays v = x/t, which only fall
/// inside the soliton region once t is large enough to dominate the
/// cone's spatial aperture. Reject early times with a usable message.
fn check_cone_rays(cone: &ConeSpec, t: f64) -> Result<()> {
    let (lo, hi) = cone.slice(t);
    let lower = -1.0 / (cone.mu * cone.mu);
    if lo / t <= lower || hi / t >= 0.0 {
        return Err(Error::validation(format!(
            "cone rays x/t in [{:.4}, {:.4}] at t = {t} leave the soliton region ({lower:.4}, 0); increase t or shrink [x1, x2]",
            lo / t,
            hi / t
        )));
    }
    Ok(())
}

fn run_asymptotics(cfg: &Config, out: &Path) -> Result<Vec<String>> {
    cfg.check_known(&[
        "mu",
        "input.scattering",
        "soliton.eta",
        "soliton.c",
        "cone.x1",
        "cone.x2",
        "cone.v1",
        "cone.v2",
        "cone.samples",
        "times",
    ])?;

    let data = asymptotic_data(cfg)?;
    let cone = cone_from(cfg, data.mu)?;
    let times = times_or(cfg, &[50.0])?;
    let samples = cfg.usize_or("cone.samples", 101)?;
    if samples < 2 {
        return Err(Error::validation("cone.samples must be at least 2"));
    }

    let mut outputs = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        check_cone_rays(&cone, t)?;
        let (lo, hi) = cone.slice(t);
        let xs = linspace(lo, hi, samples);
        let preds = rmb_core::asymptotics::asymptotic_profile(&data, &cone, &xs, t)?;
        let csv = format!("asymptotics_{i:02}.csv");
        let sidecar = format!("asymptotics_constants_{i:02}.json");
        io::write_predictions_csv(&xs, t, data.mu, &preds, &out.join(&csv))?;
        io::write_prediction_constants(&xs, &preds, &out.join(&sidecar))?;
        let lead = preds.iter().map(|p| p.leading.e.abs()).fold(0.0f64, f64::max);
        let rad = preds.iter().map(|p| p.radiation.abs()).fold(0.0f64, f64::max);
        println!(
            "asymptotics: t = {t}, slice [{lo:.3}, {hi:.3}], max |E_lead| = {lead:.6}, max |E_rad| = {rad:.3e} -> {csv}"
        );
        outputs.push(csv);
        outputs.push(sidecar);
    }
    Ok(outputs)
}

fn run_evolve(cfg: &Config, out: &Path) -> Result<Vec<String>> {
    let mut known = vec!["mu", "times", "evolve.dt"];
    known.extend(GRID_KEYS);
    known.extend(DATUM_KEYS);
    cfg.check_known(&known)?;

    let grid = build_grid(cfg)?;
    let e0 = build_datum(cfg, &grid)?;
    let mu = cfg.positive_or("mu", 1.0)?;
    let times = times_or(cfg, &[10.0])?;
    let dt = cfg.positive_or("evolve.dt", 0.01)?;

    let evo = rmb_core::evolve::evolve(&e0, &grid, mu, &times, dt)?;
    let mut outputs = Vec::new();
    for (i, field) in evo.snapshots.iter().enumerate() {
        let name = format!("evolve_{i:02}.csv");
        io::write_field_csv(field, mu, &out.join(&name))?;
        println!("evolve: t = {} -> {name}", field.t);
        outputs.push(name);
    }
    println!(
        "evolve: Bloch defect max = {:.3e}, edge max |E| = {:.3e} (left) / {:.3e} (right)",
        evo.bloch_defect_max, evo.left_boundary_max, evo.right_boundary_max
    );
    for w in &evo.warnings {
        println!("  warning: {w}");
    }
    Ok(outputs)
}

/// Least-squares slope of ln(res) against ln(t).
fn loglog_slope(ts: &[f64], res: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let lx: Vec<f64> = ts.iter().map(|&t| t.ln()).collect();
    let ly: Vec<f64> = res.iter().map(|&r| r.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|&x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Scheme-noise level: residuals at or below this are not fit for
/// slopes (the reflectionless case sits here).
const RESIDUAL_FLOOR: f64 = 2e-3;

#[derive(serde::Serialize)]
struct CompareReport {
    times: Vec<f64>,
    slices: Vec<(f64, f64)>,
    residual_leading: Vec<f64>,
    residual_corrected: Vec<f64>,
    slope_leading: Option<f64>,
    slope_corrected: Option<f64>,
    corrected_faster: Option<bool>,
}

fn run_compare(cfg: &Config, out: &Path) -> Result<Vec<String>> {
    let mut known = vec![
        "mu",
        "times",
        "evolve.dt",
        "zgrid.z_max",
        "zgrid.n",
        "cone.x1",
        "cone.x2",
        "cone.v1",
        "cone.v2",
    ];
    known.extend(GRID_KEYS);
    known.extend(DATUM_KEYS);
    cfg.check_known(&known)?;

    let grid = build_grid(cfg)?;
    let e0 = build_datum(cfg, &grid)?;
    let mu = cfg.positive_or("mu", 1.0)?;
    let times = times_or(cfg, &[25.0, 50.0, 100.0, 200.0])?;
    let dt = cfg.positive_or("evolve.dt", 0.01)?;

    let cone = cone_from(cfg, mu)?;
    for &t in &times {
        check_cone_rays(&cone, t)?;
        let (lo, hi) = cone.slice(t);
        if lo < grid.x_min() || hi > grid.x_max() {
            return Err(Error::validation(format!(
                "cone outside simulated domain: slice [{lo:.3}, {hi:.3}] at t = {t} exceeds [{}, {}]",
                grid.x_min(),
                grid.x_max()
            )));
        }
    }

    let data = direct_transform(&e0, &grid, mu, &zgrid(cfg)?)?;
    println!(
        "compare: datum -> {} discrete pair(s), max |r| = {:.3e}",
        data.discrete.len(),
        data.r.iter().map(|c| c.norm()).fold(0.0f64, f64::max)
    );

    let evo = rmb_core::evolve::evolve(&e0, &grid, mu, &times, dt)?;

    let diag = out.join("compare_residuals.csv");
    let _ = std::fs::remove_file(&diag);
    let mut slices = Vec::new();
    let mut res_lead = Vec::new();
    let mut res_corr = Vec::new();
    for (field, &t) in evo.snapshots.iter().zip(&times) {
        let (lo, hi) = cone.slice(t);
        let i_lo = (((lo - grid.x_min()) / grid.h()).ceil() as usize).min(grid.len() - 1);
        let i_hi = (((hi - grid.x_min()) / grid.h()).floor() as usize).min(grid.len() - 1);
        if i_hi <= i_lo {
            return Err(Error::validation(format!(
                "cone slice [{lo:.3}, {hi:.3}] at t = {t} contains no grid points"
            )));
        }
        let xs: Vec<f64> = (i_lo..=i_hi).map(|i| grid.x(i)).collect();
        let preds = rmb_core::asymptotics::asymptotic_profile(&data, &cone, &xs, t)?;
        let mut lead = 0.0f64;
        let mut corr = 0.0f64;
        for (k, p) in preds.iter().enumerate() {
            let sim = field.e[i_lo + k];
            lead = lead.max((sim - p.leading.e).abs());
            corr = corr.max((sim - p.leading.e - p.radiation).abs());
        }
        io::append_diagnostics_row(
            &diag,
            "t,x_lo,x_hi,n_points,residual_leading,residual_corrected",
            &[t, lo, hi, xs.len() as f64, lead, corr],
        )?;
        println!("compare: t = {t}, residual_leading = {lead:.4e}, residual_corrected = {corr:.4e}");
        slices.push((lo, hi));
        res_lead.push(lead);
        res_corr.push(corr);
    }

    // Slope fits only make sense above scheme noise and with a ladder.
    let fit = times.len() >= 2 && res_lead.iter().any(|&r| r > RESIDUAL_FLOOR);
    let (slope_leading, slope_corrected, corrected_faster) = if fit {
        let sl = loglog_slope(&times, &res_lead);
        let sc = loglog_slope(&times, &res_corr);
        println!("compare: slope_leading = {sl:.4}, slope_corrected = {sc:.4}");
        (Some(sl), Some(sc), Some(sc < sl))
    } else {
        println!("compare: residuals at scheme level (<= {RESIDUAL_FLOOR:.1e}), slope fit skipped");
        (None, None, None)
    };

    let report = CompareReport {
        times,
        slices,
        residual_leading: res_lead,
        residual_corrected: res_corr,
        slope_leading,
        slope_corrected,
        corrected_faster,
    };
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::validation(format!("cannot encode report: {e}")))?;
    std::fs::write(out.join("compare_report.json"), text)
        .map_err(|e| Error::validation(format!("cannot write report: {e}")))?;
    Ok(vec!["compare_residuals.csv".into(), "compare_report.json".into()])
}

fn run_selfcheck(cfg: &Config) -> Result<Vec<String>> {
    cfg.check_known(&[])?;
    let mut failures = 0usize;
    let mut check = |name: &str, detail: String, ok: bool| {
        println!("{} {name} ({detail})", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    {
        let grid = Grid::new(-10.0, 10.0, 401)?;
        let zero = vec![0.0; grid.len()];
        let (s11, s21) = scattering_coefficients(&zero, &grid, Cx::new(0.7, 0.0))?;
        let defect = (s11 - Cx::new(1.0, 0.0)).norm().max(s21.norm());
        check("free problem", format!("|s11-1|, |s21| <= {defect:.1e}"), defect < 1e-12);
    }
    {
        let grid = Grid::new(-30.0, 30.0, 3001)?;
        let e0 = grid.sample(|x| 2.0 / x.cosh());
        let zs: Vec<f64> = (0..41).map(|i| -4.0 + 0.2 * i as f64).collect();
        let data = direct_transform(&e0, &grid, 1.0, &zs)?;
        let ok = data.discrete.len() == 1
            && (data.discrete[0].eta - 0.5).abs() < 1e-3
            && (data.discrete[0].c_im - 1.0).abs() < 1e-3;
        let detail = data
            .discrete
            .first()
            .map(|p| format!("eta = {:.5}, c = {:.5}i", p.eta, p.c_im))
            .unwrap_or_else(|| "no discrete spectrum".into());
        check("sech spectrum", detail, ok);
    }
    {
        let mut worst = 0.0f64;
        for &mu in &[0.3f64, 0.6, 1.0] {
            for &frac in &[0.05f64, 0.3, 0.6, 0.9] {
                let v = -frac / (mu * mu);
                let sp = stationary_points(mu, v)?;
                let quartic = |z2: f64| {
                    let d = 4.0 * z2 - mu * mu;
                    (v * d * d + 4.0 * z2 + mu * mu).abs() / (1.0 + d * d)
                };
                worst = worst
                    .max(quartic(sp.zeta0 * sp.zeta0))
                    .max(quartic(-sp.zeta1.norm_sqr()));
                if sp.zeta0 <= 3.0f64.sqrt() * mu / 2.0 || sp.zeta1.norm() >= mu / 2.0 {
                    worst = f64::INFINITY;
                }
            }
        }
        check("stationary points", format!("quartic residual {worst:.1e}"), worst < 1e-12);
    }
    {
        let mut worst = 0.0f64;
        for &r in &[0.1f64, 0.5, 1.0, 2.0, 3.0] {
            let nu_abs = (r * r).ln_1p() / (2.0 * std::f64::consts::PI);
            worst = worst.max((beta12_modulus_gamma_route(r) - nu_abs.sqrt()).abs());
        }
        check("gamma route", format!("max defect {worst:.1e}"), worst < 1e-8);
    }
    {
        let (lo, hi) = cone_interval(1.0, -0.5, -1.0 / 3.0)?;
        let defect = (lo - 0.5).abs().max((hi - 0.5f64.sqrt()).abs());
        check("cone interval", format!("defect {defect:.1e}"), defect < 1e-12);
    }
    {
        let z_grid: Vec<f64> = (0..81).map(|i| -2.0 + 0.05 * i as f64).collect();
        let r: Vec<Cx> = z_grid.iter().map(|&z| Cx::new(0.3 * z, 0.1 - 0.05 * z)).collect();
        let data = ScatteringData { mu: 1.0, z_grid, r, discrete: vec![], warnings: vec![] };
        let contour = modified_reflection(&data, 0.0, 0.1, 21)?;
        let mut worst = 0.0f64;
        for (z, rv) in contour.z.iter().zip(&contour.r) {
            worst = worst.max((rv - data.sample_r(z.re)?).norm());
        }
        check("modified reflection at t = 0", format!("max defect {worst:.1e}"), worst < 1e-14);
    }
    {
        let mut worst = 0.0f64;
        for &(x, t) in &[(-3.0f64, 0.0f64), (0.4, 7.0), (12.0, 30.0)] {
            let fp = one_soliton_exact(0.5, 1.0, 0.9, x, t)?;
            worst = worst.max((fp.s * fp.s + fp.u * fp.u + fp.r * fp.r - 1.0).abs());
        }
        check("soliton Bloch constraint", format!("max defect {worst:.1e}"), worst < 1e-12);
    }

    if failures > 0 {
        return Err(Error::numeric(format!("selfcheck: {failures} check(s) failed")));
    }
    println!("selfcheck: all checks passed");
    Ok(Vec::new())
}
