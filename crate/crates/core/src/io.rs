//! On-disk formats: scattering data as JSON, fields and predictions as
//! CSV with 17-significant-digit decimals (enough for bit-exact f64
//! round trips), plus JSON run manifests echoing the effective config.

use crate::asymptotics::AsymptoticPrediction;
use crate::scattering::{ScatteringData, SpectralPair};
use crate::{Config, Error, Grid, Result, SpatialField};
use serde::{Deserialize, Serialize};
use std::io::Write as _;
use std::path::Path;

/// 17 significant digits, '.' decimal, no locale.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::validation(format!("cannot write {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))
}

#[derive(Serialize, Deserialize)]
struct ScatteringFile {
    mu: f64,
    z_grid: Vec<f64>,
    r_re: Vec<f64>,
    r_im: Vec<f64>,
    discrete: Vec<SpectralPair>,
    #[serde(default)]
    warnings: Vec<String>,
}

pub fn write_scattering(data: &ScatteringData, path: &Path) -> Result<()> {
    let file = ScatteringFile {
        mu: data.mu,
        z_grid: data.z_grid.clone(),
        r_re: data.r.iter().map(|c| c.re).collect(),
        r_im: data.r.iter().map(|c| c.im).collect(),
        discrete: data.discrete.clone(),
        warnings: data.warnings.clone(),
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::validation(format!("cannot encode scattering data: {e}")))?;
    write_text(path, &text)
}

pub fn read_scattering(path: &Path) -> Result<ScatteringData> {
    let text = read_text(path)?;
    let file: ScatteringFile = serde_json::from_str(&text)
        .map_err(|e| Error::validation(format!("{}: {e}", path.display())))?;
    if file.r_re.len() != file.z_grid.len() || file.r_im.len() != file.z_grid.len() {
        return Err(Error::validation(format!(
            "{}: reflection samples do not match z_grid",
            path.display()
        )));
    }
    let r = file
        .r_re
        .iter()
        .zip(&file.r_im)
        .map(|(&re, &im)| crate::Cx::new(re, im))
        .collect();
    Ok(ScatteringData {
        mu: file.mu,
        z_grid: file.z_grid,
        r,
        discrete: file.discrete,
        warnings: file.warnings,
    })
}

/// One snapshot as CSV: `# key = value` header comments, then
/// `x,E,s,u,r` rows.
pub fn write_field_csv(field: &SpatialField, mu: f64, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(64 * field.grid.len());
    out.push_str("# rmb field snapshot\n");
    out.push_str(&format!("# t = {}\n", fmt17(field.t)));
    out.push_str(&format!("# mu = {}\n", fmt17(mu)));
    out.push_str("x,E,s,u,r\n");
    for i in 0..field.grid.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt17(field.grid.x(i)),
            fmt17(field.e[i]),
            fmt17(field.s[i]),
            fmt17(field.u[i]),
            fmt17(field.r[i]),
        ));
    }
    write_text(path, &out)
}

/// Inverse of [`write_field_csv`]; the x column must be uniform.
pub fn read_field_csv(path: &Path) -> Result<(SpatialField, f64)> {
    let text = read_text(path)?;
    let mut t = None;
    let mut mu = None;
    let mut cols: [Vec<f64>; 5] = Default::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let slot = match key.trim() {
                    "t" => &mut t,
                    "mu" => &mut mu,
                    _ => continue,
                };
                *slot = Some(value.trim().parse::<f64>().map_err(|_| {
                    Error::validation(format!("{}: line {}: bad header number", path.display(), idx + 1))
                })?);
            }
            continue;
        }
        if line.starts_with('x') {
            continue;
        }
        let row = parse_row(line, 5, path, idx + 1)?;
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    let t = t.ok_or_else(|| Error::validation(format!("{}: missing '# t =' header", path.display())))?;
    let mu = mu.ok_or_else(|| Error::validation(format!("{}: missing '# mu =' header", path.display())))?;
    let x = &cols[0];
    if x.len() < 3 {
        return Err(Error::validation(format!("{}: needs at least 3 rows", path.display())));
    }
    let grid = Grid::new(x[0], x[x.len() - 1], x.len())?;
    let tol = 1e-9 * grid.h().abs().max(1.0);
    if (0..x.len()).any(|i| (x[i] - grid.x(i)).abs() > tol) {
        return Err(Error::validation(format!("{}: x column is not uniform", path.display())));
    }
    let [_, e, s, u, r] = cols;
    Ok((SpatialField::new(grid, t, e, s, u, r)?, mu))
}

fn parse_row(line: &str, want: usize, path: &Path, lineno: usize) -> Result<Vec<f64>> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != want {
        return Err(Error::validation(format!(
            "{}: line {lineno}: expected {want} columns, got {}",
            path.display(),
            fields.len()
        )));
    }
    let mut row = Vec::with_capacity(want);
    for f in fields {
        let v: f64 = f.parse().map_err(|_| {
            Error::validation(format!("{}: line {lineno}: '{f}' is not a number", path.display()))
        })?;
        if !v.is_finite() {
            return Err(Error::validation(format!(
                "{}: line {lineno}: non-finite value",
                path.display()
            )));
        }
        row.push(v);
    }
    Ok(row)
}

/// Two-column `x,E0` samples for user-supplied initial data.
pub fn read_samples_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = read_text(path)?;
    let mut xs = Vec::new();
    let mut es = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
            continue;
        }
        let row = parse_row(line, 2, path, idx + 1)?;
        xs.push(row[0]);
        es.push(row[1]);
    }
    if xs.len() < 3 {
        return Err(Error::validation(format!("{}: needs at least 3 sample rows", path.display())));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation(format!("{}: x must increase", path.display())));
    }
    Ok((xs, es))
}

/// Cone predictions at fixed t, one row per evaluation point.
pub fn write_predictions_csv(
    xs: &[f64],
    t: f64,
    mu: f64,
    preds: &[AsymptoticPrediction],
    path: &Path,
) -> Result<()> {
    if xs.len() != preds.len() {
        return Err(Error::validation("prediction rows do not match points"));
    }
    let mut out = String::with_capacity(96 * xs.len());
    out.push_str("# rmb asymptotic prediction\n");
    out.push_str(&format!("# t = {}\n", fmt17(t)));
    out.push_str(&format!("# mu = {}\n", fmt17(mu)));
    out.push_str("x,t,E_lead,E_rad,s,u,r\n");
    for (x, p) in xs.iter().zip(preds) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt17(*x),
            fmt17(t),
            fmt17(p.leading.e),
            fmt17(p.radiation),
            fmt17(p.leading.s),
            fmt17(p.leading.u),
            fmt17(p.leading.r),
        ));
    }
    write_text(path, &out)
}

#[derive(Serialize)]
struct ConstantsRow {
    x: f64,
    zeta0: f64,
    zeta1_im: f64,
    beta: f64,
    nu0: f64,
    delta0a_re: f64,
    delta0a_im: f64,
    b_re: f64,
    b_im: f64,
    order_estimate: f64,
    warnings: Vec<String>,
}

/// JSON sidecar with the per-ray phase constants behind a prediction CSV.
pub fn write_prediction_constants(
    xs: &[f64],
    preds: &[AsymptoticPrediction],
    path: &Path,
) -> Result<()> {
    if xs.len() != preds.len() {
        return Err(Error::validation("prediction rows do not match points"));
    }
    let rows: Vec<ConstantsRow> = xs
        .iter()
        .zip(preds)
        .map(|(&x, p)| ConstantsRow {
            x,
            zeta0: p.constants.zeta0,
            zeta1_im: p.constants.zeta1.im,
            beta: p.constants.beta,
            nu0: p.constants.nu0,
            delta0a_re: p.constants.delta0a.re,
            delta0a_im: p.constants.delta0a.im,
            b_re: p.radiation_coefficient.re,
            b_im: p.radiation_coefficient.im,
            order_estimate: p.order_estimate,
            warnings: p.warnings.clone(),
        })
        .collect();
    let text = serde_json::to_string_pretty(&rows)
        .map_err(|e| Error::validation(format!("cannot encode constants: {e}")))?;
    write_text(path, &text)
}

#[derive(Serialize)]
struct Manifest<'a> {
    verb: &'a str,
    config: std::collections::BTreeMap<String, String>,
    outputs: &'a [String],
}

/// Run manifest: verb, effective key=value config, files written.
pub fn write_manifest(verb: &str, cfg: &Config, outputs: &[String], path: &Path) -> Result<()> {
    let manifest = Manifest { verb, config: cfg.echo(), outputs };
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::validation(format!("cannot encode manifest: {e}")))?;
    write_text(path, &text)
}

/// Append one CSV line of named diagnostics; creates the file with a
/// header on first use.
pub fn append_diagnostics_row(path: &Path, header: &str, values: &[f64]) -> Result<()> {
    let fresh = !path.exists();
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::validation(format!("cannot open {}: {e}", path.display())))?;
    let mut line = String::new();
    if fresh {
        line.push_str(header);
        line.push('\n');
    }
    let cells: Vec<String> = values.iter().map(|&v| fmt17(v)).collect();
    line.push_str(&cells.join(","));
    line.push('\n');
    file.write_all(line.as_bytes())
        .map_err(|e| Error::validation(format!("cannot write {}: {e}", path.display())))
}
