//! Python bindings: states, observables, inequality evaluators, cumulants,
//! the concrete scenarios, parameter sweeps and the self-test.

use std::collections::BTreeMap;

use gurlab::{bch, cumulant, gur, problem, scan, scenarios, selftest};
use gurlab::{CMatrix, Complex64, GurError, Inequality};
use num_complex::Complex;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: GurError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    CMatrix::from_rows(&rows).map_err(err)
}

fn ineq(name: &str) -> PyResult<Inequality> {
    name.parse().map_err(err)
}

#[pyclass(name = "Observable", module = "pygurlab", frozen, from_py_object)]
#[derive(Clone)]
struct PyObservable(gurlab::Observable);

#[pymethods]
impl PyObservable {
    /// Hermitian matrix given as a list of rows of complex numbers.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self(gurlab::Observable::new(matrix(rows)?).map_err(err)?))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues().to_vec()
    }

    #[getter]
    fn sigma_max(&self) -> f64 {
        self.0.sigma_max()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        self.0.matrix().to_rows()
    }

    /// `e^{sX}` as a list of rows.
    fn exp(&self, s: Complex64) -> Vec<Vec<Complex64>> {
        self.0.exp_scaled(s).to_rows()
    }

    fn __repr__(&self) -> String {
        format!("Observable(dim={}, eigenvalues={:?})", self.0.dim(), self.0.eigenvalues())
    }
}

#[pyclass(name = "State", module = "pygurlab", frozen, from_py_object)]
#[derive(Clone)]
struct PyState(gurlab::State);

#[pymethods]
impl PyState {
    #[staticmethod]
    fn pure(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self(gurlab::State::pure(&amplitudes).map_err(err)?))
    }

    #[staticmethod]
    fn pure_normalized(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self(gurlab::State::pure_normalized(&amplitudes).map_err(err)?))
    }

    #[staticmethod]
    fn density(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self(gurlab::State::density(matrix(rows)?).map_err(err)?))
    }

    /// Convex combination of `(weight, state)` pairs.
    #[staticmethod]
    fn mixture(components: Vec<(f64, PyState)>) -> PyResult<Self> {
        let parts: Vec<_> = components.into_iter().map(|(w, s)| (w, s.0)).collect();
        Ok(Self(gurlab::State::mixture(&parts).map_err(err)?))
    }

    #[staticmethod]
    fn product(a: &PyState, b: &PyState) -> Self {
        Self(gurlab::State::product(&a.0, &b.0))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn is_pure(&self) -> bool {
        self.0.is_pure()
    }

    fn amplitudes(&self) -> Option<Vec<Complex64>> {
        self.0.amplitudes().map(<[_]>::to_vec)
    }

    fn density_matrix(&self) -> Vec<Vec<Complex64>> {
        self.0.density_matrix().to_rows()
    }

    fn expect(&self, x: &PyObservable) -> PyResult<Complex64> {
        self.0.expect(x.0.matrix()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("State(dim={}, pure={})", self.0.dim(), self.0.is_pure())
    }
}

#[pyclass(name = "GurReport", module = "pygurlab", frozen, get_all)]
struct PyReport {
    name: String,
    lhs: f64,
    rhs: f64,
    margin: f64,
    s: Complex64,
    t: Complex64,
    satisfied: bool,
    tol: f64,
    unproven_regime: bool,
    warnings: Vec<String>,
}

impl From<gurlab::GurReport> for PyReport {
    fn from(r: gurlab::GurReport) -> Self {
        Self {
            name: r.name.to_string(),
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            s: r.s,
            t: r.t,
            satisfied: r.satisfied,
            tol: r.tol,
            unproven_regime: r.unproven_regime,
            warnings: r.warnings,
        }
    }
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "GurReport({}, lhs={}, rhs={}, margin={}, satisfied={})",
            self.name, self.lhs, self.rhs, self.margin, self.satisfied
        )
    }
}

fn report(r: gurlab::Result<gurlab::GurReport>) -> PyResult<PyReport> {
    r.map(PyReport::from).map_err(err)
}

const ONE: Complex64 = Complex::new(1.0, 0.0);

#[pyfunction]
fn inequalities() -> Vec<&'static str> {
    Inequality::ALL.iter().map(|i| i.as_str()).collect()
}

/// Evaluates the named inequality at `(s, t)`.
#[pyfunction]
#[pyo3(signature = (inequality, state, x, y, s = ONE, t = ONE, tol = None))]
fn evaluate(
    inequality: &str,
    state: &PyState,
    x: &PyObservable,
    y: &PyObservable,
    s: Complex64,
    t: Complex64,
    tol: Option<f64>,
) -> PyResult<PyReport> {
    let r = gur::evaluate(ineq(inequality)?, &state.0, &x.0, &y.0, s, t).map_err(err)?;
    Ok(match tol {
        Some(tol) => r.with_tol(tol),
        None => r,
    }
    .into())
}

#[pyfunction]
#[pyo3(signature = (state, x, y, s = ONE, t = ONE))]
fn gur_full(state: &PyState, x: &PyObservable, y: &PyObservable, s: Complex64, t: Complex64) -> PyResult<PyReport> {
    report(gur::gur_full(&state.0, &x.0, &y.0, s, t))
}

#[pyfunction]
#[pyo3(signature = (state, x, y, s = ONE, t = ONE))]
fn classical_ur(state: &PyState, x: &PyObservable, y: &PyObservable, s: Complex64, t: Complex64) -> PyResult<PyReport> {
    report(gur::classical_ur(&state.0, &x.0, &y.0, s, t))
}

#[pyfunction]
#[pyo3(signature = (state, x, y, s = ONE, t = ONE))]
fn quantum_ur(state: &PyState, x: &PyObservable, y: &PyObservable, s: Complex64, t: Complex64) -> PyResult<PyReport> {
    report(gur::quantum_ur(&state.0, &x.0, &y.0, s, t))
}

#[pyfunction]
fn exp_ratio_ur(state: &PyState, x: &PyObservable, y: &PyObservable, s: f64, t: f64) -> PyResult<PyReport> {
    report(gur::exp_ratio_ur(&state.0, &x.0, &y.0, s, t))
}

#[pyfunction]
fn robertson(state: &PyState, x: &PyObservable, y: &PyObservable) -> PyResult<PyReport> {
    report(gur::robertson(&state.0, &x.0, &y.0))
}

#[pyfunction]
fn schrodinger(state: &PyState, x: &PyObservable, y: &PyObservable) -> PyResult<PyReport> {
    report(gur::schrodinger(&state.0, &x.0, &y.0))
}

#[pyfunction]
fn pearson(state: &PyState, x: &PyObservable, y: &PyObservable) -> PyResult<f64> {
    gur::pearson(&state.0, &x.0, &y.0).map_err(err)
}

#[pyfunction]
fn variance_ur_optimal(state: &PyState, x: &PyObservable, y: &PyObservable) -> PyResult<PyReport> {
    report(gur::variance_ur_optimal(&state.0, &x.0, &y.0))
}

#[pyfunction]
fn variance_skewness_ur(state: &PyState, x: &PyObservable, y: &PyObservable, eps: f64) -> PyResult<PyReport> {
    report(gur::variance_skewness_ur(&state.0, &x.0, &y.0, eps))
}

/// Absolute defect of the first-order identity; zero up to roundoff.
#[pyfunction]
#[pyo3(signature = (state, x, y, s = ONE, t = ONE))]
fn first_order_identity(state: &PyState, x: &PyObservable, y: &PyObservable, s: Complex64, t: Complex64) -> PyResult<f64> {
    gur::first_order_identity(&state.0, &x.0, &y.0, s, t).map_err(err)
}

/// `{"k1": .., "k2": .., "k3": .., "k4": ..}`
#[pyfunction]
fn cumulants<'py>(py: Python<'py>, state: &PyState, x: &PyObservable) -> PyResult<Bound<'py, PyDict>> {
    let k = cumulant::cumulants_single(&state.0, &x.0).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("k1", k.k1)?;
    d.set_item("k2", k.k2)?;
    d.set_item("k3", k.k3)?;
    d.set_item("k4", k.k4)?;
    Ok(d)
}

#[pyfunction]
fn cross_cumulants<'py>(py: Python<'py>, state: &PyState, x: &PyObservable, y: &PyObservable) -> PyResult<Bound<'py, PyDict>> {
    let k = cumulant::cross_cumulants(&state.0, &x.0, &y.0).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("k11", k.k11)?;
    d.set_item("k12", k.k12)?;
    d.set_item("k21", k.k21)?;
    Ok(d)
}

/// `log <e^{sX}>`.
#[pyfunction]
fn cgf(state: &PyState, x: &PyObservable, s: Complex64) -> PyResult<Complex64> {
    Ok(cumulant::cgf(&state.0, &x.0, s).map_err(err)?.value)
}

#[pyfunction]
fn cgf_series(state: &PyState, x: &PyObservable, s: Complex64, order: usize) -> PyResult<Complex64> {
    cumulant::cgf_series(&state.0, &x.0, s, order).map_err(err)
}

#[pyfunction]
fn convergence_radius(x: &PyObservable) -> PyResult<f64> {
    Ok(cumulant::convergence_radius(&x.0).map_err(err)?.value())
}

/// `log(e^{sX} e^{tY})`, principal branch.
#[pyfunction]
fn z_exact(x: &PyObservable, y: &PyObservable, s: Complex64, t: Complex64) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(bch::z_exact(&x.0, &y.0, s, t).map_err(err)?.to_rows())
}

/// Truncated BCH sum through `order` (1 to 5).
#[pyfunction]
fn bch_sum(x: &PyObservable, y: &PyObservable, s: Complex64, t: Complex64, order: usize) -> PyResult<Vec<Vec<Complex64>>> {
    let terms = bch::bch_terms(x.0.matrix(), y.0.matrix(), s, t).map_err(err)?;
    Ok(bch::bch_partial_sum(&terms, order).map_err(err)?.to_rows())
}

#[pyfunction]
fn k2_coefficient(state: &PyState, x: &PyObservable, y: &PyObservable, s: Complex64, t: Complex64) -> PyResult<Complex64> {
    bch::k2_coefficient(&state.0, &x.0, &y.0, s, t).map_err(err)
}

#[pyfunction]
fn k3_coefficient(state: &PyState, x: &PyObservable, y: &PyObservable, s: Complex64, t: Complex64) -> PyResult<Complex64> {
    bch::k3_coefficient(&state.0, &x.0, &y.0, s, t).map_err(err)
}

fn obs3((a, b, c): (gurlab::Observable, gurlab::Observable, gurlab::Observable)) -> (PyObservable, PyObservable, PyObservable) {
    (PyObservable(a), PyObservable(b), PyObservable(c))
}

#[pyfunction]
fn pauli() -> (PyObservable, PyObservable, PyObservable) {
    obs3(scenarios::pauli())
}

#[pyfunction]
fn angular_momenta_l1() -> (PyObservable, PyObservable, PyObservable) {
    obs3(scenarios::angular_momenta_l1())
}

#[pyfunction]
fn collective_observables() -> (PyObservable, PyObservable, PyObservable) {
    obs3(scenarios::collective_observables())
}

#[pyfunction]
fn psi1(theta: f64, phi: f64) -> PyState {
    PyState(scenarios::psi1(theta, phi))
}

#[pyfunction]
fn psi2() -> PyState {
    PyState(scenarios::psi2())
}

#[pyfunction]
fn psi3() -> PyState {
    PyState(scenarios::psi3())
}

#[pyfunction]
fn werner(eta: f64) -> PyResult<PyState> {
    Ok(PyState(scenarios::werner(eta).map_err(err)?.rho))
}

#[pyfunction]
fn collective_variance_sum(state: &PyState) -> PyResult<f64> {
    scenarios::collective_variance_sum(&state.0).map_err(err)
}

/// `(zeta, sum, k2_sum, holds)` for a qubit state.
#[pyfunction]
fn zeta_bound(state: &PyState) -> PyResult<([f64; 3], f64, f64, bool)> {
    let z = scenarios::zeta_bound(&state.0).map_err(err)?;
    Ok((z.zeta, z.sum, z.k2_sum, z.holds))
}

/// Closed-form third cumulant of the CHSH operator on a Werner state.
#[pyfunction]
fn kappa3_s(eta: f64, theta: f64) -> PyResult<f64> {
    scenarios::kappa3_s(eta, theta).map_err(err)
}

#[pyfunction]
fn kappa3_s_numeric(eta: f64, theta: f64) -> PyResult<f64> {
    scenarios::kappa3_s_numeric(eta, theta).map_err(err)
}

/// `(theta*, max |kappa3|)`.
#[pyfunction]
#[pyo3(signature = (eta, tol = 1e-10))]
fn max_abs_kappa3(eta: f64, tol: f64) -> PyResult<(f64, f64)> {
    scenarios::max_abs_kappa3(eta, tol).map_err(err)
}

#[pyfunction]
fn lhvt_k3_bound() -> f64 {
    scenarios::lhvt_k3_bound()
}

#[pyfunction]
fn third_central_moment(values: Vec<f64>, probs: Vec<f64>) -> f64 {
    scenarios::third_central_moment(&values, &probs)
}

#[pyfunction]
fn example1_surfaces(theta: f64, phi: f64) -> (f64, f64) {
    scenarios::example1_surfaces(theta, phi)
}

#[pyfunction]
#[pyo3(signature = (lo = 0.0, hi = 1.0, tol = 1e-12))]
fn skewness_nonlocality_threshold(lo: f64, hi: f64, tol: f64) -> PyResult<f64> {
    scan::skewness_nonlocality_threshold(lo, hi, tol).map_err(err)
}

#[pyclass(name = "ScanResult", module = "pygurlab", frozen)]
struct PyScan(scan::ScanResult);

#[pymethods]
impl PyScan {
    #[getter]
    fn target(&self) -> &str {
        &self.0.target
    }

    #[getter]
    fn axes(&self) -> Vec<String> {
        self.0.axes.clone()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.0.shape
    }

    /// `(coords, lhs, rhs, margin)` per grid point, first axis major.
    #[getter]
    fn rows(&self) -> Vec<(Vec<f64>, f64, f64, f64)> {
        self.0.rows.iter().map(|r| (r.coords.clone(), r.lhs, r.rhs, r.margin)).collect()
    }

    #[getter]
    fn margins(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.margin).collect()
    }

    #[getter]
    fn violation_cells(&self) -> Vec<usize> {
        self.0.violation_cells.clone()
    }

    fn violation_regions(&self) -> Vec<Vec<usize>> {
        self.0.violation_regions()
    }

    fn region_contains(&self, region: Vec<usize>, point: Vec<f64>) -> bool {
        self.0.region_contains(&region, &point)
    }

    /// `(coords, margin)` of the smallest margin.
    #[getter]
    fn extremum(&self) -> Option<(Vec<f64>, f64)> {
        self.0.extremum.as_ref().map(|e| (e.coords.clone(), e.value))
    }

    fn __len__(&self) -> usize {
        self.0.rows.len()
    }
}

fn axis((name, lo, hi, n): (String, f64, f64, usize)) -> scan::Axis {
    scan::Axis::new(name, lo, hi, n)
}

fn grid(var1: (String, f64, f64, usize), var2: Option<(String, f64, f64, usize)>, fix: BTreeMap<String, Complex64>) -> scan::GridSpec {
    let mut g = match var2 {
        Some(v) => scan::GridSpec::two(axis(var1), axis(v)),
        None => scan::GridSpec::one(axis(var1)),
    };
    for (k, v) in fix {
        g = g.fix(k, v);
    }
    g
}

fn options(tol: f64, parallel: bool) -> scan::SweepOptions {
    scan::SweepOptions { tol, parallel }
}

#[pyfunction]
fn sweep_targets() -> Vec<String> {
    scan::targets()
}

/// Sweeps a named target. Axes are `(name, lo, hi, n)` tuples.
#[pyfunction]
#[pyo3(signature = (target, var1, var2 = None, fix = BTreeMap::new(), tol = scan::VIOLATION_TOL, parallel = true))]
fn sweep(
    py: Python<'_>,
    target: &str,
    var1: (String, f64, f64, usize),
    var2: Option<(String, f64, f64, usize)>,
    fix: BTreeMap<String, Complex64>,
    tol: f64,
    parallel: bool,
) -> PyResult<PyScan> {
    let g = grid(var1, var2, fix);
    let r = py.detach(|| scan::sweep(target, &g, options(tol, parallel)));
    Ok(PyScan(r.map_err(err)?))
}

/// Sweeps an inequality over `s`/`t` (or `s_re`, `s_im`, `t_re`, `t_im`)
/// for a user-supplied instance.
#[pyfunction]
#[pyo3(signature = (inequality, state, x, y, var1, var2 = None, fix = BTreeMap::new(), tol = scan::VIOLATION_TOL, parallel = true))]
#[allow(clippy::too_many_arguments)]
fn sweep_instance(
    py: Python<'_>,
    inequality: &str,
    state: &PyState,
    x: &PyObservable,
    y: &PyObservable,
    var1: (String, f64, f64, usize),
    var2: Option<(String, f64, f64, usize)>,
    fix: BTreeMap<String, Complex64>,
    tol: f64,
    parallel: bool,
) -> PyResult<PyScan> {
    let which = ineq(inequality)?;
    let g = grid(var1, var2, fix);
    let r = py.detach(|| scan::sweep_instance(which, &state.0, &x.0, &y.0, &g, options(tol, parallel)));
    Ok(PyScan(r.map_err(err)?))
}

type Loaded = (PyState, BTreeMap<String, PyObservable>, BTreeMap<String, Complex64>);

/// Loads a problem file; returns `(state, observables, params)`.
#[pyfunction]
fn load_problem(text: &str) -> PyResult<Loaded> {
    let p = problem::ProblemFile::parse(text).and_then(|f| f.build()).map_err(err)?;
    let obs = p.observables.into_iter().map(|(k, v)| (k, PyObservable(v))).collect();
    Ok((PyState(p.state), obs, p.params))
}

type SuiteRow = (String, usize, usize, Option<f64>);

/// Runs the randomized self-test. Returns `(ok, suites)` with one
/// `(name, passed, total, worst)` tuple per suite.
#[pyfunction(name = "selftest")]
#[pyo3(signature = (n = 1000, seed = None, fault = None))]
fn run_selftest(py: Python<'_>, n: usize, seed: Option<u64>, fault: Option<&str>) -> PyResult<(bool, Vec<SuiteRow>)> {
    let fault = fault.map(str::parse::<selftest::Fault>).transpose().map_err(PyValueError::new_err)?;
    let mut cfg = selftest::Config { n, fault, ..Default::default() };
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let r = py.detach(|| selftest::run(&cfg));
    let suites = r.suites.iter().map(|s| (s.name.to_string(), s.passed, s.total, s.worst)).collect();
    Ok((r.ok(), suites))
}

#[pymodule]
fn pygurlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyObservable>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyScan>()?;
    m.add_function(wrap_pyfunction!(inequalities, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(gur_full, m)?)?;
    m.add_function(wrap_pyfunction!(classical_ur, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_ur, m)?)?;
    m.add_function(wrap_pyfunction!(exp_ratio_ur, m)?)?;
    m.add_function(wrap_pyfunction!(robertson, m)?)?;
    m.add_function(wrap_pyfunction!(schrodinger, m)?)?;
    m.add_function(wrap_pyfunction!(pearson, m)?)?;
    m.add_function(wrap_pyfunction!(variance_ur_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(variance_skewness_ur, m)?)?;
    m.add_function(wrap_pyfunction!(first_order_identity, m)?)?;
    m.add_function(wrap_pyfunction!(cumulants, m)?)?;
    m.add_function(wrap_pyfunction!(cross_cumulants, m)?)?;
    m.add_function(wrap_pyfunction!(cgf, m)?)?;
    m.add_function(wrap_pyfunction!(cgf_series, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_radius, m)?)?;
    m.add_function(wrap_pyfunction!(z_exact, m)?)?;
    m.add_function(wrap_pyfunction!(bch_sum, m)?)?;
    m.add_function(wrap_pyfunction!(k2_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(k3_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(pauli, m)?)?;
    m.add_function(wrap_pyfunction!(angular_momenta_l1, m)?)?;
    m.add_function(wrap_pyfunction!(collective_observables, m)?)?;
    m.add_function(wrap_pyfunction!(psi1, m)?)?;
    m.add_function(wrap_pyfunction!(psi2, m)?)?;
    m.add_function(wrap_pyfunction!(psi3, m)?)?;
    m.add_function(wrap_pyfunction!(werner, m)?)?;
    m.add_function(wrap_pyfunction!(collective_variance_sum, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_bound, m)?)?;
    m.add_function(wrap_pyfunction!(kappa3_s, m)?)?;
    m.add_function(wrap_pyfunction!(kappa3_s_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(max_abs_kappa3, m)?)?;
    m.add_function(wrap_pyfunction!(lhvt_k3_bound, m)?)?;
    m.add_function(wrap_pyfunction!(third_central_moment, m)?)?;
    m.add_function(wrap_pyfunction!(example1_surfaces, m)?)?;
    m.add_function(wrap_pyfunction!(skewness_nonlocality_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_targets, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_instance, m)?)?;
    m.add_function(wrap_pyfunction!(load_problem, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
