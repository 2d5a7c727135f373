//! Parameter sweeps over the inequality evaluators, violation regions,
//! 1-D maximization and bisection.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GurError, Result};
use crate::gur::{evaluate, Inequality};
use crate::qmat::{Observable, State};
use crate::scenarios::{angular_momenta_l1, example1_surfaces, kappa3_s, lhvt_k3_bound, max_abs_kappa3, pauli, psi1, psi2};

/// Default margin threshold for violation cells.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Coarse grid size used by [`maximize_1d`].
pub const COARSE_POINTS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, n: usize) -> Self {
        Self { name: name.into(), lo, hi, n }
    }

    fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(GurError::NonFinite);
        }
        if self.n == 0 {
            return Err(GurError::Binding(format!("axis {} has no points", self.name)));
        }
        if self.n >= 2 && self.lo >= self.hi {
            return Err(GurError::Binding(format!("axis {} needs lo < hi", self.name)));
        }
        Ok(())
    }

    /// Grid coordinate `i`; a single-point axis sits at `lo`.
    pub fn value(&self, i: usize) -> f64 {
        if self.n == 1 {
            self.lo
        } else if i + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub var1: Axis,
    pub var2: Option<Axis>,
    pub fixed: Vec<(String, Complex64)>,
}

impl GridSpec {
    pub fn one(var1: Axis) -> Self {
        Self { var1, var2: None, fixed: Vec::new() }
    }

    pub fn two(var1: Axis, var2: Axis) -> Self {
        Self { var1, var2: Some(var2), fixed: Vec::new() }
    }

    pub fn fix(mut self, name: impl Into<String>, value: Complex64) -> Self {
        self.fixed.push((name.into(), value));
        self
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.var1.n, self.var2.as_ref().map_or(1, |a| a.n))
    }

    pub fn len(&self) -> usize {
        let (a, b) = self.shape();
        a * b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axis_names(&self) -> Vec<&str> {
        let mut v = vec![self.var1.name.as_str()];
        if let Some(a) = &self.var2 {
            v.push(a.name.as_str());
        }
        v
    }

    fn validate(&self) -> Result<()> {
        self.var1.validate()?;
        if let Some(a) = &self.var2 {
            a.validate()?;
            if a.name == self.var1.name {
                return Err(GurError::Binding(format!("axis {} bound twice", a.name)));
            }
        }
        for (name, v) in &self.fixed {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(GurError::NonFinite);
            }
            if self.axis_names().contains(&name.as_str()) {
                return Err(GurError::Binding(format!("{name} is both fixed and swept")));
            }
        }
        Ok(())
    }

    fn coords(&self, index: usize) -> Vec<f64> {
        let (_, n2) = self.shape();
        let mut c = vec![self.var1.value(index / n2)];
        if let Some(a) = &self.var2 {
            c.push(a.value(index % n2));
        }
        c
    }

    fn params(&self, coords: &[f64]) -> Params {
        let mut p = Params::default();
        for (name, v) in &self.fixed {
            p.0.insert(name.clone(), *v);
        }
        for (name, v) in self.axis_names().into_iter().zip(coords) {
            p.0.insert(name.to_string(), Complex64::new(*v, 0.0));
        }
        p
    }
}

/// Named parameter values at one grid point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(BTreeMap<String, Complex64>);

impl Params {
    pub fn get(&self, name: &str) -> Option<Complex64> {
        self.0.get(name).copied()
    }

    pub fn real(&self, name: &str, default: f64) -> f64 {
        self.get(name).map_or(default, |v| v.re)
    }

    /// Complex parameter `name`, with `name_re` / `name_im` overriding the
    /// components when present.
    pub fn complex(&self, name: &str, default: Complex64) -> Complex64 {
        let mut z = self.get(name).unwrap_or(default);
        if let Some(v) = self.get(&format!("{name}_re")) {
            z.re = v.re;
        }
        if let Some(v) = self.get(&format!("{name}_im")) {
            z.im = v.re;
        }
        z
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub coords: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremum {
    pub coords: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub target: String,
    pub grid: GridSpec,
    pub axes: Vec<String>,
    pub shape: (usize, usize),
    pub rows: Vec<ScanRow>,
    /// Row indices with `margin < -tol`.
    pub violation_cells: Vec<usize>,
    /// Row with the smallest margin.
    pub extremum: Option<Extremum>,
    pub tol: f64,
}

impl ScanResult {
    /// Connected groups of violation cells (4-neighbour adjacency on the
    /// grid), each sorted, ordered by first index.
    pub fn violation_regions(&self) -> Vec<Vec<usize>> {
        let (n1, n2) = self.shape;
        let mut bad = vec![false; n1 * n2];
        for &i in &self.violation_cells {
            bad[i] = true;
        }
        let mut seen = vec![false; n1 * n2];
        let mut regions = Vec::new();
        for &start in &self.violation_cells {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut region = Vec::new();
            while let Some(k) = stack.pop() {
                region.push(k);
                let (i, j) = (k / n2, k % n2);
                let mut nb = Vec::with_capacity(4);
                if i > 0 {
                    nb.push(k - n2);
                }
                if i + 1 < n1 {
                    nb.push(k + n2);
                }
                if j > 0 {
                    nb.push(k - 1);
                }
                if j + 1 < n2 {
                    nb.push(k + 1);
                }
                for m in nb {
                    if bad[m] && !seen[m] {
                        seen[m] = true;
                        stack.push(m);
                    }
                }
            }
            region.sort_unstable();
            regions.push(region);
        }
        regions
    }

    /// Whether `point` lies in the bounding box of `region`, widened by half
    /// a grid step on each side.
    pub fn region_contains(&self, region: &[usize], point: &[f64]) -> bool {
        let mut axes = vec![&self.grid.var1];
        axes.extend(self.grid.var2.as_ref());
        if region.is_empty() || point.len() != axes.len() {
            return false;
        }
        axes.iter().enumerate().all(|(d, axis)| {
            let half = if axis.n > 1 { 0.5 * (axis.hi - axis.lo) / (axis.n - 1) as f64 } else { 0.0 };
            let (lo, hi) = region.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| {
                let v = self.rows[k].coords[d];
                (lo.min(v), hi.max(v))
            });
            point[d] >= lo - half && point[d] <= hi + half
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub tol: f64,
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { tol: VIOLATION_TOL, parallel: true }
    }
}

/// Sweeps an arbitrary `(lhs, rhs)` function over the grid. Rows are in
/// lexicographic grid order (`var1` major) whether or not the evaluation
/// runs in parallel; the first failing point by index is reported.
pub fn sweep_fn<F>(target: &str, grid: &GridSpec, opts: SweepOptions, f: F) -> Result<ScanResult>
where
    F: Fn(&Params) -> Result<(f64, f64)> + Sync,
{
    grid.validate()?;
    let eval = |k: usize| {
        let coords = grid.coords(k);
        let (lhs, rhs) = f(&grid.params(&coords))?;
        Ok(ScanRow { coords, lhs, rhs, margin: lhs - rhs })
    };
    let rows: Vec<Result<ScanRow>> = if opts.parallel {
        (0..grid.len()).into_par_iter().map(eval).collect()
    } else {
        (0..grid.len()).map(eval).collect()
    };
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let violation_cells = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.margin < -opts.tol)
        .map(|(i, _)| i)
        .collect();
    let extremum = rows
        .iter()
        .filter(|r| r.margin.is_finite())
        .min_by(|a, b| a.margin.total_cmp(&b.margin))
        .map(|r| Extremum { coords: r.coords.clone(), value: r.margin });
    Ok(ScanResult {
        target: target.to_string(),
        grid: grid.clone(),
        axes: grid.axis_names().into_iter().map(String::from).collect(),
        shape: grid.shape(),
        rows,
        violation_cells,
        extremum,
        tol: opts.tol,
    })
}

fn check_names(target: &str, grid: &GridSpec, allowed: &[&str]) -> Result<()> {
    let names = grid.axis_names().into_iter().chain(grid.fixed.iter().map(|(n, _)| n.as_str()));
    for name in names {
        if !allowed.contains(&name) {
            return Err(GurError::Binding(format!(
                "{target} has no parameter {name} (expected one of: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

const QUBIT_PARAMS: &[&str] = &["theta", "phi", "s", "t", "s_re", "s_im", "t_re", "t_im"];
const INSTANCE_PARAMS: &[&str] = &["s", "t", "s_re", "s_im", "t_re", "t_im"];

/// Target ids accepted by [`sweep`].
///
/// * any inequality name: `psi1(theta, phi)` with `X = sigma_x`, `Y = sigma_y`,
///   parameters `theta`, `phi`, `s`, `t` (default `s = t = 1`)
/// * `<inequality>@psi2`: `psi2` with `X = Lx`, `Y = Ly`, parameters `s`, `t`
/// * `example1_surfaces`: closed forms of the classical relation over `theta`, `phi`
/// * `skewness_nonlocality`: `8 >= |k3(S)|` over `eta`, `theta`
/// * `max_skewness_nonlocality`: `8 >= max_theta |k3(S)|` over `eta`
pub fn targets() -> Vec<String> {
    let mut v: Vec<String> = Inequality::ALL.iter().map(|i| i.as_str().to_string()).collect();
    v.extend(Inequality::ALL.iter().map(|i| format!("{i}@psi2")));
    v.extend(["example1_surfaces", "skewness_nonlocality", "max_skewness_nonlocality"].map(String::from));
    v
}

fn st(p: &Params) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    (p.complex("s", one), p.complex("t", one))
}

/// Sweeps a named target; see [`targets`].
pub fn sweep(target: &str, grid: &GridSpec, opts: SweepOptions) -> Result<ScanResult> {
    match target {
        "example1_surfaces" => {
            check_names(target, grid, &["theta", "phi"])?;
            sweep_fn(target, grid, opts, |p| Ok(example1_surfaces(p.real("theta", 0.0), p.real("phi", 0.0))))
        }
        "skewness_nonlocality" => {
            check_names(target, grid, &["eta", "theta"])?;
            sweep_fn(target, grid, opts, |p| {
                Ok((lhvt_k3_bound(), kappa3_s(p.real("eta", 1.0), p.real("theta", 0.0))?.abs()))
            })
        }
        "max_skewness_nonlocality" => {
            check_names(target, grid, &["eta"])?;
            sweep_fn(target, grid, opts, |p| Ok((lhvt_k3_bound(), max_abs_kappa3(p.real("eta", 1.0), 1e-10)?.1)))
        }
        _ => {
            if let Some(name) = target.strip_suffix("@psi2") {
                let which: Inequality = name.parse()?;
                let (lx, ly, _) = angular_momenta_l1();
                return sweep_instance(which, &psi2(), &lx, &ly, grid, opts);
            }
            let which: Inequality = target.parse()?;
            check_names(target, grid, QUBIT_PARAMS)?;
            let (sx, sy, _) = pauli();
            sweep_fn(target, grid, opts, |p| {
                let state = psi1(p.real("theta", 0.0), p.real("phi", 0.0));
                let (s, t) = st(p);
                let r = evaluate(which, &state, &sx, &sy, s, t)?;
                Ok((r.lhs, r.rhs))
            })
        }
    }
}

/// Sweeps `s`, `t` for a fixed state and observable pair.
pub fn sweep_instance(which: Inequality, state: &State, x: &Observable, y: &Observable, grid: &GridSpec, opts: SweepOptions) -> Result<ScanResult> {
    let target = which.as_str();
    check_names(target, grid, INSTANCE_PARAMS)?;
    sweep_fn(target, grid, opts, |p| {
        let (s, t) = st(p);
        let r = evaluate(which, state, x, y, s, t)?;
        Ok((r.lhs, r.rhs))
    })
}

/// Maximizes `f` on `[lo, hi]`: a coarse scan of [`COARSE_POINTS`] points,
/// then golden-section refinement of the best bracket until it is narrower
/// than `tol`. NaN values count as `-inf`. Returns `(x*, f(x*))`.
pub fn maximize_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let g = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return (lo, g(lo));
    }
    let tol = tol.max(1e-12);
    let n = COARSE_POINTS;
    let h = (hi - lo) / (n - 1) as f64;
    let at = |i: usize| if i + 1 == n { hi } else { lo + h * i as f64 };
    let (mut best_i, mut best_v) = (0, g(lo));
    for i in 1..n {
        let v = g(at(i));
        if v > best_v {
            best_i = i;
            best_v = v;
        }
    }
    let mut a = at(best_i.saturating_sub(1));
    let mut b = at((best_i + 1).min(n - 1));
    let (best_x, mut best) = (at(best_i), best_v);
    let mut best_x = best_x;

    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = g(d);
        }
    }
    for (x, v) in [(c, fc), (d, fd), ((a + b) / 2.0, g((a + b) / 2.0))] {
        if v > best {
            best = v;
            best_x = x;
        }
    }
    (best_x, best)
}

/// Bisection for `g(x) = target` on `[lo, hi]`, stopping once the bracket is
/// at most `tol` wide and returning its midpoint. An endpoint that hits the
/// target exactly is returned as is.
pub fn threshold_bisect<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, target: f64, tol: f64) -> Result<f64> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(GurError::Binding(format!("invalid bracket [{lo}, {hi}]")));
    }
    let g_lo = g(lo) - target;
    let g_hi = g(hi) - target;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if !(g_lo.signum() != g_hi.signum()) || g_lo.is_nan() || g_hi.is_nan() {
        return Err(GurError::NoSignChange { g_lo, g_hi });
    }
    let (mut a, mut b) = (lo, hi);
    let neg_at_a = g_lo < 0.0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let v = g(m) - target;
        if v == 0.0 {
            return Ok(m);
        }
        if (v < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Werner parameter above which `max_theta |k3(S)|` exceeds the local
/// hidden-variable bound.
pub fn skewness_nonlocality_threshold(lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let gap = |eta: f64| max_abs_kappa3(eta, 1e-12).map(|(_, v)| v).unwrap_or(f64::NAN);
    threshold_bisect(gap, lo, hi, lhvt_k3_bound(), tol)
}

/// `(eta, theta*, max_theta |k3(S)|)` at `points` evenly spaced `eta` in
/// `[lo, hi]`, evaluated in parallel.
pub fn max_abs_kappa3_table(lo: f64, hi: f64, points: usize, tol: f64) -> Result<Vec<(f64, f64, f64)>> {
    let axis = Axis::new("eta", lo, hi, points);
    axis.validate()?;
    (0..points)
        .into_par_iter()
        .map(|i| {
            let eta = axis.value(i);
            max_abs_kappa3(eta, tol).map(|(th, v)| (eta, th, v))
        })
        .collect()
}
