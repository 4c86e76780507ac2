//! Python surface of the toolkit. Thin wrappers: every call validates
//! through the same library entry points as the CLI, errors map to
//! ValueError (bad arguments) or RuntimeError (numerical failure), and
//! complex numbers cross as Python complex.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rmb_core::asymptotics::{self, AsymptoticPrediction, ConeSpec};
use rmb_core::scattering::{self, ScatteringData, SpectralPair};
use rmb_core::{evolve, soliton, Cx, Grid, SpatialField};

fn err(e: rmb_core::Error) -> PyErr {
    let msg = e.to_string();
    match e.exit_code() {
        2 => PyValueError::new_err(msg),
        _ => PyRuntimeError::new_err(msg),
    }
}

fn pairs_from(py_pairs: Vec<(f64, f64)>) -> Vec<SpectralPair> {
    py_pairs.into_iter().map(|(eta, c_im)| SpectralPair { eta, c_im }).collect()
}

#[pyclass(name = "Grid", frozen)]
#[derive(Clone)]
struct GridPy {
    inner: Grid,
}

#[pymethods]
impl GridPy {
    #[new]
    fn new(x_min: f64, x_max: f64, n: usize) -> PyResult<Self> {
        Ok(GridPy { inner: Grid::new(x_min, x_max, n).map_err(err)? })
    }

    #[staticmethod]
    fn with_step(x_min: f64, x_max: f64, h: f64) -> PyResult<Self> {
        Ok(GridPy { inner: Grid::with_step(x_min, x_max, h).map_err(err)? })
    }

    #[getter]
    fn x_min(&self) -> f64 {
        self.inner.x_min()
    }

    #[getter]
    fn x_max(&self) -> f64 {
        self.inner.x_max()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.h()
    }

    fn points(&self) -> Vec<f64> {
        self.inner.points().collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(x_min={}, x_max={}, n={})",
            self.inner.x_min(),
            self.inner.x_max(),
            self.inner.len()
        )
    }
}

#[pyclass(name = "ScatteringData", frozen)]
struct ScatteringDataPy {
    inner: ScatteringData,
}

#[pymethods]
impl ScatteringDataPy {
    /// Build data directly, e.g. synthetic reflection samples or a
    /// reflectionless spectrum for the residue solver.
    #[new]
    #[pyo3(signature = (mu, z_grid, r, discrete = Vec::new()))]
    fn new(mu: f64, z_grid: Vec<f64>, r: Vec<Cx>, discrete: Vec<(f64, f64)>) -> PyResult<Self> {
        if z_grid.len() != r.len() {
            return Err(PyValueError::new_err("z_grid and r need equal lengths"));
        }
        Ok(ScatteringDataPy {
            inner: ScatteringData {
                mu,
                z_grid,
                r,
                discrete: pairs_from(discrete),
                warnings: Vec::new(),
            },
        })
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    #[getter]
    fn z_grid(&self) -> Vec<f64> {
        self.inner.z_grid.clone()
    }

    #[getter]
    fn r(&self) -> Vec<Cx> {
        self.inner.r.clone()
    }

    /// Discrete spectrum as (eta, c_im) tuples; the pair is
    /// (z, c) = (i eta, i c_im).
    #[getter]
    fn discrete(&self) -> Vec<(f64, f64)> {
        self.inner.discrete.iter().map(|p| (p.eta, p.c_im)).collect()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    fn sample_r(&self, z: f64) -> PyResult<Cx> {
        self.inner.sample_r(z).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "ScatteringData(mu={}, {} reflection samples, {} bound states)",
            self.inner.mu,
            self.inner.r.len(),
            self.inner.discrete.len()
        )
    }
}

#[pyclass(name = "SpatialField", frozen)]
struct SpatialFieldPy {
    inner: SpatialField,
}

#[pymethods]
impl SpatialFieldPy {
    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.grid.points().collect()
    }

    #[getter]
    fn e(&self) -> Vec<f64> {
        self.inner.e.clone()
    }

    #[getter]
    fn s(&self) -> Vec<f64> {
        self.inner.s.clone()
    }

    #[getter]
    fn u(&self) -> Vec<f64> {
        self.inner.u.clone()
    }

    #[getter]
    fn r(&self) -> Vec<f64> {
        self.inner.r.clone()
    }

    fn bloch_norm_defect(&self) -> f64 {
        self.inner.bloch_norm_defect()
    }

    fn boundary_defect(&self) -> f64 {
        self.inner.boundary_defect()
    }

    fn __len__(&self) -> usize {
        self.inner.grid.len()
    }

    fn __repr__(&self) -> String {
        format!("SpatialField(t={}, n={})", self.inner.t, self.inner.grid.len())
    }
}

#[pyclass(name = "ConeSpec", frozen)]
#[derive(Clone)]
struct ConeSpecPy {
    inner: ConeSpec,
}

#[pymethods]
impl ConeSpecPy {
    #[new]
    fn new(x1: f64, x2: f64, v1: f64, v2: f64, mu: f64) -> PyResult<Self> {
        Ok(ConeSpecPy { inner: ConeSpec::new(x1, x2, v1, v2, mu).map_err(err)? })
    }

    #[getter]
    fn x1(&self) -> f64 {
        self.inner.x1
    }

    #[getter]
    fn x2(&self) -> f64 {
        self.inner.x2
    }

    #[getter]
    fn v1(&self) -> f64 {
        self.inner.v1
    }

    #[getter]
    fn v2(&self) -> f64 {
        self.inner.v2
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    /// Spatial interval the cone occupies at time t.
    fn slice(&self, t: f64) -> (f64, f64) {
        self.inner.slice(t)
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!("ConeSpec(x1={}, x2={}, v1={}, v2={}, mu={})", c.x1, c.x2, c.v1, c.v2, c.mu)
    }
}

#[pyclass(name = "Evolution", frozen)]
struct EvolutionPy {
    inner: evolve::Evolution,
}

#[pymethods]
impl EvolutionPy {
    #[getter]
    fn snapshots(&self) -> Vec<SpatialFieldPy> {
        self.inner.snapshots.iter().map(|f| SpatialFieldPy { inner: f.clone() }).collect()
    }

    #[getter]
    fn bloch_defect_max(&self) -> f64 {
        self.inner.bloch_defect_max
    }

    #[getter]
    fn left_boundary_max(&self) -> f64 {
        self.inner.left_boundary_max
    }

    #[getter]
    fn right_boundary_max(&self) -> f64 {
        self.inner.right_boundary_max
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Evolution({} snapshots, bloch_defect_max={:.3e})",
            self.inner.snapshots.len(),
            self.inner.bloch_defect_max
        )
    }
}

#[pyclass(name = "Prediction", frozen)]
struct PredictionPy {
    inner: AsymptoticPrediction,
}

#[pymethods]
impl PredictionPy {
    #[getter]
    fn e(&self) -> f64 {
        self.inner.leading.e
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.leading.s
    }

    #[getter]
    fn u(&self) -> f64 {
        self.inner.leading.u
    }

    #[getter]
    fn r(&self) -> f64 {
        self.inner.leading.r
    }

    /// Real t^{-1/2} correction to E; zero for reflectionless data.
    #[getter]
    fn radiation(&self) -> f64 {
        self.inner.radiation
    }

    #[getter]
    fn order_estimate(&self) -> f64 {
        self.inner.order_estimate
    }

    #[getter]
    fn radiation_coefficient(&self) -> Cx {
        self.inner.radiation_coefficient
    }

    #[getter]
    fn zeta0(&self) -> f64 {
        self.inner.constants.zeta0
    }

    #[getter]
    fn zeta1(&self) -> Cx {
        self.inner.constants.zeta1
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.constants.beta
    }

    #[getter]
    fn nu0(&self) -> f64 {
        self.inner.constants.nu0
    }

    #[getter]
    fn delta0a(&self) -> Cx {
        self.inner.constants.delta0a
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Prediction(e={:.6e}, radiation={:.6e})",
            self.inner.leading.e, self.inner.radiation
        )
    }
}

/// Closed one-soliton form for the pair (i eta, i c) at (x, t),
/// returned as the tuple (e, s, u, r).
#[pyfunction]
fn one_soliton(eta: f64, c: f64, mu: f64, x: f64, t: f64) -> PyResult<(f64, f64, f64, f64)> {
    let p = soliton::one_soliton_exact(eta, c, mu, x, t).map_err(err)?;
    Ok((p.e, p.s, p.u, p.r))
}

/// Reflection coefficient on the given real z grid plus the discrete
/// spectrum with norming constants.
#[pyfunction]
fn direct_transform(
    e: Vec<f64>,
    grid: &GridPy,
    mu: f64,
    z_grid: Vec<f64>,
) -> PyResult<ScatteringDataPy> {
    let data = scattering::direct_transform(&e, &grid.inner, mu, &z_grid).map_err(err)?;
    Ok(ScatteringDataPy { inner: data })
}

/// Bound-state etas of the field (eigenvalues z = i eta), ascending.
#[pyfunction]
fn discrete_spectrum(e: Vec<f64>, grid: &GridPy) -> PyResult<(Vec<f64>, Vec<String>)> {
    scattering::discrete_spectrum(&e, &grid.inner).map_err(err)
}

/// Norming constant c = i c_im at the pole z = i eta.
#[pyfunction]
fn norming_constant(e: Vec<f64>, grid: &GridPy, eta: f64) -> PyResult<(f64, Vec<String>)> {
    scattering::norming_constant(&e, &grid.inner, eta).map_err(err)
}

/// (s11, s21) at real z.
#[pyfunction]
fn scattering_coefficients(e: Vec<f64>, grid: &GridPy, z: f64) -> PyResult<(Cx, Cx)> {
    scattering::scattering_coefficients(&e, &grid.inner, Cx::new(z, 0.0)).map_err(err)
}

/// Medium (s, u, r) slaved to E by the spatial ODE, ground state on
/// the left.
#[pyfunction]
fn bloch_sweep(
    e: Vec<f64>,
    grid: &GridPy,
    mu: f64,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    evolve::bloch_sweep(&e, &grid.inner, mu).map_err(err)
}

/// N-soliton field at time t from (eta, c_im) pairs via the residue
/// solve at every grid point.
#[pyfunction]
fn nsoliton_field(
    pairs: Vec<(f64, f64)>,
    grid: &GridPy,
    t: f64,
    mu: f64,
) -> PyResult<SpatialFieldPy> {
    let field =
        soliton::nsoliton_field(&pairs_from(pairs), None, &grid.inner, t, mu).map_err(err)?;
    Ok(SpatialFieldPy { inner: field })
}

/// March the field from t = 0 through the snapshot times.
#[pyfunction]
fn evolve_field(
    e0: Vec<f64>,
    grid: &GridPy,
    mu: f64,
    snapshot_times: Vec<f64>,
    dt_max: f64,
) -> PyResult<EvolutionPy> {
    let ev = evolve::evolve(&e0, &grid.inner, mu, &snapshot_times, dt_max).map_err(err)?;
    Ok(EvolutionPy { inner: ev })
}

/// Real and imaginary stationary points (zeta0, zeta1) of the phase on
/// the ray v = x/t.
#[pyfunction]
fn stationary_points(mu: f64, v: f64) -> PyResult<(f64, Cx)> {
    let sp = asymptotics::stationary_points(mu, v).map_err(err)?;
    Ok((sp.zeta0, sp.zeta1))
}

/// beta = 8 / theta''(zeta0).
#[pyfunction]
fn beta_coefficient(zeta0: f64, mu: f64) -> f64 {
    asymptotics::beta_coefficient(zeta0, mu)
}

/// Eta interval whose soliton velocities fall inside [v1, v2].
#[pyfunction]
fn cone_interval(mu: f64, v1: f64, v2: f64) -> PyResult<(f64, f64)> {
    asymptotics::cone_interval(mu, v1, v2).map_err(err)
}

/// Long-time prediction (soliton content plus radiation term) at each
/// x in xs, all inside the cone at time t.
#[pyfunction]
fn asymptotic_profile(
    data: &ScatteringDataPy,
    cone: &ConeSpecPy,
    xs: Vec<f64>,
    t: f64,
) -> PyResult<Vec<PredictionPy>> {
    let preds =
        asymptotics::asymptotic_profile(&data.inner, &cone.inner, &xs, t).map_err(err)?;
    Ok(preds.into_iter().map(|p| PredictionPy { inner: p }).collect())
}

/// Time-dressed reflection data on the deformed contour: the real axis
/// outside two upper semicircular arcs of radius kappa around +-mu/2.
/// Returns (z samples, dressed r samples).
#[pyfunction]
fn modified_reflection(
    data: &ScatteringDataPy,
    t: f64,
    kappa: f64,
    arc_points: usize,
) -> PyResult<(Vec<Cx>, Vec<Cx>)> {
    let mc = scattering::modified_reflection(&data.inner, t, kappa, arc_points).map_err(err)?;
    Ok((mc.z, mc.r))
}

/// |beta12| through the Gamma-function route; equals sqrt|nu|.
#[pyfunction]
fn beta12_modulus_gamma_route(r_abs: f64) -> f64 {
    asymptotics::beta12_modulus_gamma_route(r_abs)
}

#[pymodule]
fn rmb_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<GridPy>()?;
    m.add_class::<ScatteringDataPy>()?;
    m.add_class::<SpatialFieldPy>()?;
    m.add_class::<ConeSpecPy>()?;
    m.add_class::<EvolutionPy>()?;
    m.add_class::<PredictionPy>()?;
    m.add_function(wrap_pyfunction!(one_soliton, m)?)?;
    m.add_function(wrap_pyfunction!(direct_transform, m)?)?;
    m.add_function(wrap_pyfunction!(discrete_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(norming_constant, m)?)?;
    m.add_function(wrap_pyfunction!(scattering_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(bloch_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(nsoliton_field, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_field, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_points, m)?)?;
    m.add_function(wrap_pyfunction!(beta_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(cone_interval, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_profile, m)?)?;
    m.add_function(wrap_pyfunction!(modified_reflection, m)?)?;
    m.add_function(wrap_pyfunction!(beta12_modulus_gamma_route, m)?)?;
    Ok(())
}
