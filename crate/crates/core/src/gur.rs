//! Inequality evaluators. Each returns a [`GurReport`] carrying both sides
//! and the margin `lhs - rhs`; a negative margin is a violation.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::bch::{bch_terms, exp_product};
use crate::cumulant::{anticommutator3, cgf, cross_cumulants, cumulants_single};
use crate::error::{GurError, Result};
use crate::qmat::{mat_exp, Observable, State};
use crate::tolerances::Tolerances;

/// Parameter magnitude above which truncated relations are flagged.
pub const SMALL_PARAMETER: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    GurFull,
    GurFamiliar,
    VarianceUr,
    VarianceUrClassical,
    VarianceUrOptimal,
    SkewnessUr,
    VarianceSkewnessUr,
    ClassicalUr,
    QuantumUr,
    ExpRatioUr,
    Robertson,
    Schrodinger,
    PearsonBound,
    WeightedZeta,
}

impl Inequality {
    pub const ALL: [Inequality; 14] = [
        Self::GurFull,
        Self::GurFamiliar,
        Self::VarianceUr,
        Self::VarianceUrClassical,
        Self::VarianceUrOptimal,
        Self::SkewnessUr,
        Self::VarianceSkewnessUr,
        Self::ClassicalUr,
        Self::QuantumUr,
        Self::ExpRatioUr,
        Self::Robertson,
        Self::Schrodinger,
        Self::PearsonBound,
        Self::WeightedZeta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::GurFull => "gur_full",
            Self::GurFamiliar => "gur_familiar",
            Self::VarianceUr => "variance_ur",
            Self::VarianceUrClassical => "variance_ur_classical",
            Self::VarianceUrOptimal => "variance_ur_optimal",
            Self::SkewnessUr => "skewness_ur",
            Self::VarianceSkewnessUr => "variance_skewness_ur",
            Self::ClassicalUr => "classical_ur",
            Self::QuantumUr => "quantum_ur",
            Self::ExpRatioUr => "exp_ratio_ur",
            Self::Robertson => "robertson",
            Self::Schrodinger => "schrodinger",
            Self::PearsonBound => "pearson_bound",
            Self::WeightedZeta => "weighted_zeta",
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Inequality {
    type Err = GurError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.as_str() == s)
            .ok_or_else(|| GurError::UnknownInequality(s.to_string()))
    }
}

/// Both sides of an inequality at given parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GurReport {
    pub name: Inequality,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub s: Complex64,
    pub t: Complex64,
    pub satisfied: bool,
    pub tol: f64,
    /// Set for density-matrix inputs.
    pub unproven_regime: bool,
    pub warnings: Vec<String>,
}

impl GurReport {
    pub fn new(name: Inequality, lhs: f64, rhs: f64, s: Complex64, t: Complex64) -> Self {
        let tol = Tolerances::default().report;
        let margin = lhs - rhs;
        Self {
            name,
            lhs,
            rhs,
            margin,
            s,
            t,
            satisfied: margin >= -tol,
            tol,
            unproven_regime: false,
            warnings: Vec::new(),
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.satisfied = self.margin >= -tol;
        self
    }

    fn regime(mut self, state: &State) -> Self {
        self.unproven_regime = !state.is_pure();
        self
    }

    fn warn(mut self, msg: impl Into<String>) -> Self {
        self.warnings.push(msg.into());
        self
    }

    fn warn_if_large(self, s: Complex64, t: Complex64) -> Self {
        if s.norm() > SMALL_PARAMETER || t.norm() > SMALL_PARAMETER {
            self.warn(format!(
                "truncated relation evaluated at |s| = {:.3}, |t| = {:.3} (> {SMALL_PARAMETER})",
                s.norm(),
                t.norm()
            ))
        } else {
            self
        }
    }
}

fn nonzero(z: Complex64) -> Result<Complex64> {
    if z.norm() < Tolerances::default().zero_expectation {
        Err(GurError::ZeroExpectation(z.norm()))
    } else {
        Ok(z)
    }
}

fn check_dims(state: &State, x: &Observable, y: &Observable) -> Result<()> {
    x.matrix().check_same_dim(y.matrix())?;
    if state.dim() != x.dim() {
        return Err(GurError::Dimension {
            expected: state.dim(),
            found: x.dim(),
        });
    }
    Ok(())
}

/// `<e^{(s+s*) X}>`, real and positive.
fn doubled_moment_generator(state: &State, x: &Observable, s: Complex64) -> Result<f64> {
    let v = nonzero(state.expect(&x.exp_scaled(Complex64::new(2.0 * s.re, 0.0)))?)?;
    Ok(v.re)
}

/// `<e^{sX} e^{tY}>`
fn product_expectation(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<Complex64> {
    nonzero(state.expect(&exp_product(x, y, s, t)?)?)
}

/// `K[(s+s*)X] + K[(t+t*)Y] >= K(Z_st) + K*(Z_st)`
pub fn gur_full(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let lhs = cgf(state, x, Complex64::new(2.0 * s.re, 0.0))?.value.re + cgf(state, y, Complex64::new(2.0 * t.re, 0.0))?.value.re;
    let rhs = 2.0 * product_expectation(state, x, y, s, t)?.ln().re;
    Ok(GurReport::new(Inequality::GurFull, lhs, rhs, s, t).regime(state))
}

/// Same inequality with the single-variable generating functions moved to
/// the left, leaving the dependence `K(Z_st) - K(sX) - K(tY)` on the right.
pub fn gur_familiar(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let ksx = cgf(state, x, s)?.value;
    let kty = cgf(state, y, t)?.value;
    let lhs = (cgf(state, x, Complex64::new(2.0 * s.re, 0.0))?.value.re - 2.0 * ksx.re)
        + (cgf(state, y, Complex64::new(2.0 * t.re, 0.0))?.value.re - 2.0 * kty.re);
    let kz = product_expectation(state, x, y, s, t)?.ln();
    let rhs = 2.0 * (kz - ksx - kty).re;
    Ok(GurReport::new(Inequality::GurFamiliar, lhs, rhs, s, t).regime(state))
}

/// Both sides of the first-order identity
/// `(s+s*)<X> + (t+t*)<Y> = <sX+tY> + <sX+tY>*`.
pub fn first_order_sides(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<(Complex64, Complex64)> {
    check_dims(state, x, y)?;
    let ex = state.expect(x.matrix())?;
    let ey = state.expect(y.matrix())?;
    let lhs = (s + s.conj()) * ex + (t + t.conj()) * ey;
    let z1 = state.expect(&(&x.matrix().scale(s) + &y.matrix().scale(t)))?;
    Ok((lhs, z1 + z1.conj()))
}

/// `|lhs - rhs|` of the first-order identity.
pub fn first_order_identity(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<f64> {
    let (l, r) = first_order_sides(state, x, y, s, t)?;
    Ok((l - r).norm())
}

/// `|s|^2 k2(X) + |t|^2 k2(Y) >= [k11(sX,tY) + <Z11>] + c.c.`
pub fn variance_ur(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let kx = cumulants_single(state, x)?;
    let ky = cumulants_single(state, y)?;
    let k11 = cross_cumulants(state, x, y)?.k11;
    let comm = state.expect(&x.matrix().commutator(y.matrix()))?;
    let lhs = s.norm_sqr() * kx.k2 + t.norm_sqr() * ky.k2;
    let rhs = 2.0 * (s * t * k11 + s * t * comm / 2.0).re;
    Ok(GurReport::new(Inequality::VarianceUr, lhs, rhs, s, t)
        .regime(state)
        .warn_if_large(s, t))
}

/// Commuting-observable version: `|s|^2 k2(X) + |t|^2 k2(Y) >= k11(sX,tY) + c.c.`
pub fn variance_ur_classical(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let kx = cumulants_single(state, x)?;
    let ky = cumulants_single(state, y)?;
    let k11 = cross_cumulants(state, x, y)?.k11;
    let lhs = s.norm_sqr() * kx.k2 + t.norm_sqr() * ky.k2;
    let rhs = 2.0 * (s * t * k11).re;
    Ok(GurReport::new(Inequality::VarianceUrClassical, lhs, rhs, s, t)
        .regime(state)
        .warn_if_large(s, t))
}

/// Phase of `st` that maximizes the right-hand side of [`variance_ur`]:
/// `Re(st)` along the anticommutator part and `Im(st)` along the commutator
/// part.
fn optimal_phase(state: &State, x: &Observable, y: &Observable) -> Result<f64> {
    let anti = 2.0 * cross_cumulants(state, x, y)?.k11;
    // <[X,Y]> = i w with w real
    let w = state.expect(&x.matrix().commutator(y.matrix()))?.im;
    Ok(if anti == 0.0 && w == 0.0 { 0.0 } else { (-w).atan2(anti) })
}

/// [`variance_ur`] at `|s| = s_abs`, `|t| = t_abs` with the optimal phase.
pub fn variance_ur_optimal_weighted(state: &State, x: &Observable, y: &Observable, s_abs: f64, t_abs: f64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let half = optimal_phase(state, x, y)? / 2.0;
    let s = Complex64::from_polar(s_abs, half);
    let t = Complex64::from_polar(t_abs, half);
    let mut r = variance_ur(state, x, y, s, t)?;
    r.name = Inequality::VarianceUrOptimal;
    r.warnings.clear();
    Ok(r)
}

/// Variance relation at the weights `|s| = sqrt(dY/dX)`, `|t| = sqrt(dX/dY)`
/// and optimal phase, which is the Schrodinger relation in the form
///
/// ```text
/// 2 dX dY >= sqrt(|<[X,Y]>|^2 + |<{X,Y}> - 2<X><Y>|^2)
/// ```
///
/// If either variance is degenerate the unweighted `|s| = |t| = 1` form is
/// reported instead, with a warning.
pub fn variance_ur_optimal(state: &State, x: &Observable, y: &Observable) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let floor = Tolerances::default().degenerate_variance;
    let dx = cumulants_single(state, x)?.k2.max(0.0).sqrt();
    let dy = cumulants_single(state, y)?.k2.max(0.0).sqrt();
    if dx <= floor || dy <= floor {
        let which = if dx <= floor { "X" } else { "Y" };
        let r = variance_ur_optimal_weighted(state, x, y, 1.0, 1.0)?;
        return Ok(r.warn(format!("{}; unweighted fallback", GurError::DegenerateVariance { which })));
    }
    variance_ur_optimal_weighted(state, x, y, (dy / dx).sqrt(), (dx / dy).sqrt())
}

/// `dX^2 dY^2 >= |<[X,Y]>|^2 / 4`
pub fn robertson(state: &State, x: &Observable, y: &Observable) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let vx = cumulants_single(state, x)?.k2;
    let vy = cumulants_single(state, y)?.k2;
    let comm = state.expect(&x.matrix().commutator(y.matrix()))?;
    let one = Complex64::new(1.0, 0.0);
    Ok(GurReport::new(Inequality::Robertson, vx * vy, comm.norm_sqr() / 4.0, one, one).regime(state))
}

/// `dX^2 dY^2 >= |<[X,Y]>|^2 / 4 + |<{X,Y}> - 2<X><Y>|^2 / 4`
pub fn schrodinger(state: &State, x: &Observable, y: &Observable) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let vx = cumulants_single(state, x)?.k2;
    let vy = cumulants_single(state, y)?.k2;
    let comm = state.expect(&x.matrix().commutator(y.matrix()))?;
    let anti = 2.0 * cross_cumulants(state, x, y)?.k11;
    let one = Complex64::new(1.0, 0.0);
    let rhs = comm.norm_sqr() / 4.0 + anti * anti / 4.0;
    Ok(GurReport::new(Inequality::Schrodinger, vx * vy, rhs, one, one).regime(state))
}

/// Pearson coefficient `|<(X-<X>)(Y-<Y>)>| / (dX dY)`.
pub fn pearson(state: &State, x: &Observable, y: &Observable) -> Result<f64> {
    check_dims(state, x, y)?;
    let floor = Tolerances::default().degenerate_variance;
    let dx = cumulants_single(state, x)?.k2.max(0.0).sqrt();
    let dy = cumulants_single(state, y)?.k2.max(0.0).sqrt();
    if dx <= floor {
        return Err(GurError::DegenerateVariance { which: "X" });
    }
    if dy <= floor {
        return Err(GurError::DegenerateVariance { which: "Y" });
    }
    let ex = state.expect(x.matrix())?.re;
    let ey = state.expect(y.matrix())?.re;
    let cx = x.shifted(-ex);
    let cy = y.shifted(-ey);
    let cov = state.expect(&cx.matrix().matmul(cy.matrix()))?;
    Ok(cov.norm() / (dx * dy))
}

/// `1 >= rho_{X,Y}`
pub fn pearson_bound(state: &State, x: &Observable, y: &Observable) -> Result<GurReport> {
    let rho = pearson(state, x, y)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(GurReport::new(Inequality::PearsonBound, 1.0, rho, one, one).regime(state))
}

/// Third-order truncation of the familiar form:
///
/// ```text
/// |s|^2 [k2(X) + (s+s*) k3(X)/2] + |t|^2 [k2(Y) + (t+t*) k3(Y)/2]
///   >= [k11 + (k12 + k21)/2 + <Z11 + Z12 + Z21> + (<{Z1,Z11}> - 2<Z1><Z11>)/2] + c.c.
/// ```
///
/// with all cross cumulants taken at `(sX, tY)`.
pub fn skewness_ur(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let kx = cumulants_single(state, x)?;
    let ky = cumulants_single(state, y)?;
    let cross = cross_cumulants(state, x, y)?.scaled(s, t);
    let terms = bch_terms(x.matrix(), y.matrix(), s, t)?;

    let lhs = s.norm_sqr() * (kx.k2 + s.re * kx.k3) + t.norm_sqr() * (ky.k2 + t.re * ky.k3);
    let z = state.expect(&(&(&terms.z11 + &terms.z12) + &terms.z21))?;
    let z1 = state.expect(&terms.z1)?;
    let z11 = state.expect(&terms.z11)?;
    let sym = state.expect(&terms.z1.anticommutator(&terms.z11))? - 2.0 * z1 * z11;
    let bracket = cross.k11 + (cross.k12 + cross.k21) / 2.0 + z + sym / 2.0;
    Ok(GurReport::new(Inequality::SkewnessUr, lhs, 2.0 * bracket.re, s, t)
        .regime(state)
        .warn_if_large(s, t))
}

/// Variance-skewness relation for commuting `X`, `Y` at `s = t = eps` real:
///
/// ```text
/// k2(X) + k2(Y) + eps [k3(X) + k3(Y)]
///   >= <{X,Y}> - 2<X><Y>
///    + eps [<{X,Y,Y}>/3 - (<X><Y^2> + <{X,Y}><Y>) + 2<X><Y>^2 + (X <-> Y)]
/// ```
pub fn variance_skewness_ur(state: &State, x: &Observable, y: &Observable, eps: f64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let norm = x.matrix().commutator(y.matrix()).norm_2();
    if norm > Tolerances::default().commutation {
        return Err(GurError::NonCommuting { norm });
    }
    let kx = cumulants_single(state, x)?;
    let ky = cumulants_single(state, y)?;
    let (xm, ym) = (x.matrix(), y.matrix());
    let e = |m: &crate::qmat::CMatrix| state.expect(m).map(|z| z.re);
    let (ex, ey) = (e(xm)?, e(ym)?);
    let (ex2, ey2) = (e(&xm.matmul(xm))?, e(&ym.matmul(ym))?);
    let anti = e(&xm.anticommutator(ym))?;
    let xyy = e(&anticommutator3(xm, ym))?;
    let yxx = e(&anticommutator3(ym, xm))?;

    let lhs = kx.k2 + ky.k2 + eps * (kx.k3 + ky.k3);
    let third = xyy / 3.0 - (ex * ey2 + anti * ey) + 2.0 * ex * ey * ey
        + yxx / 3.0 - (ey * ex2 + anti * ex) + 2.0 * ey * ex * ex;
    let rhs = anti - 2.0 * ex * ey + eps * third;
    let e_c = Complex64::new(eps, 0.0);
    let mut report = GurReport::new(Inequality::VarianceSkewnessUr, lhs, rhs, e_c, e_c).regime(state);
    let sigma = x.sigma_max().max(y.sigma_max());
    if 2.0 * eps.abs() * sigma >= std::f64::consts::LN_2 {
        report = report.warn(format!(
            "|eps| = {:.3} outside the convergence region |eps| < log2 / (2 sigma_max) = {:.3}",
            eps.abs(),
            std::f64::consts::LN_2 / (2.0 * sigma)
        ));
    }
    Ok(report)
}

/// `<e^{(s+s*)X}> <e^{(t+t*)Y}> >= |<e^{sX+tY}>|^2`; holds for commuting
/// observables, may fail otherwise.
pub fn classical_ur(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let lhs = doubled_moment_generator(state, x, s)? * doubled_moment_generator(state, y, t)?;
    let joint = mat_exp(&(&x.matrix().scale(s) + &y.matrix().scale(t)));
    let rhs = nonzero(state.expect(&joint)?)?.norm_sqr();
    Ok(GurReport::new(Inequality::ClassicalUr, lhs, rhs, s, t).regime(state))
}

/// `<e^{(s+s*)X}> <e^{(t+t*)Y}> >= |<e^{sX} e^{tY}>|^2`
pub fn quantum_ur(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let lhs = doubled_moment_generator(state, x, s)? * doubled_moment_generator(state, y, t)?;
    let rhs = product_expectation(state, x, y, s, t)?.norm_sqr();
    Ok(GurReport::new(Inequality::QuantumUr, lhs, rhs, s, t).regime(state))
}

/// Normalized form of [`quantum_ur`] for real `s`, `t`:
///
/// ```text
/// <e^{2sX}>/<e^{sX}>^2 * <e^{2tY}>/<e^{tY}>^2 >= |<e^{sX} e^{tY}> / (<e^{sX}><e^{tY}>)|^2
/// ```
pub fn exp_ratio_ur(state: &State, x: &Observable, y: &Observable, s: f64, t: f64) -> Result<GurReport> {
    check_dims(state, x, y)?;
    let (sc, tc) = (Complex64::new(s, 0.0), Complex64::new(t, 0.0));
    let ex = nonzero(state.expect(&x.exp_scaled(sc))?)?;
    let ey = nonzero(state.expect(&y.exp_scaled(tc))?)?;
    let lhs = doubled_moment_generator(state, x, sc)? / ex.norm_sqr() * doubled_moment_generator(state, y, tc)? / ey.norm_sqr();
    let rhs = (product_expectation(state, x, y, sc, tc)? / (ex * ey)).norm_sqr();
    Ok(GurReport::new(Inequality::ExpRatioUr, lhs, rhs, sc, tc).regime(state))
}

/// Dispatches on `which`. Relations defined for real parameters use the
/// real parts of `s` and `t` (`variance_skewness_ur` takes `eps = Re s`);
/// parameter-free relations ignore them.
pub fn evaluate(which: Inequality, state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<GurReport> {
    let real_only = |r: GurReport| {
        if s.im != 0.0 || t.im != 0.0 {
            r.warn("imaginary parts of s, t ignored")
        } else {
            r
        }
    };
    match which {
        Inequality::GurFull => gur_full(state, x, y, s, t),
        Inequality::GurFamiliar => gur_familiar(state, x, y, s, t),
        Inequality::VarianceUr => variance_ur(state, x, y, s, t),
        Inequality::VarianceUrClassical => variance_ur_classical(state, x, y, s, t),
        Inequality::VarianceUrOptimal => variance_ur_optimal(state, x, y),
        Inequality::SkewnessUr => skewness_ur(state, x, y, s, t),
        Inequality::VarianceSkewnessUr => variance_skewness_ur(state, x, y, s.re).map(real_only),
        Inequality::ClassicalUr => classical_ur(state, x, y, s, t),
        Inequality::QuantumUr => quantum_ur(state, x, y, s, t),
        Inequality::ExpRatioUr => exp_ratio_ur(state, x, y, s.re, t.re).map(real_only),
        Inequality::Robertson => robertson(state, x, y),
        Inequality::Schrodinger => schrodinger(state, x, y),
        Inequality::PearsonBound => pearson_bound(state, x, y),
        Inequality::WeightedZeta => {
            if state.dim() != 2 {
                return Err(GurError::Dimension { expected: 2, found: state.dim() });
            }
            crate::scenarios::weighted_zeta_report(state, [(s, t); 3])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{tensor, CMatrix};
    use crate::scenarios::{angular_momenta_l1, pauli, psi1, psi2, qubit_up};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn names_round_trip() {
        for i in Inequality::ALL {
            assert_eq!(i.as_str().parse::<Inequality>().unwrap(), i);
        }
        assert!("nope".parse::<Inequality>().is_err());
    }

    #[test]
    fn report_tolerance() {
        let r = GurReport::new(Inequality::GurFull, 1.0, 1.0 + 5e-11, c(0.0, 0.0), c(0.0, 0.0));
        assert!(r.satisfied);
        assert!(!r.clone().with_tol(1e-12).satisfied);
    }

    #[test]
    fn gur_full_equality_and_zero() {
        let (sx, sy, _) = pauli();
        let st = psi1(0.7, 2.0);
        let r = gur_full(&st, &sx, &sx, c(0.4, 0.0), c(0.4, 0.0)).unwrap();
        assert!(r.margin.abs() < 1e-10, "{}", r.margin);
        let r = gur_full(&st, &sx, &sy, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        let r = gur_full(&st, &sx, &sy, c(0.3, 0.0), c(0.0, 0.2)).unwrap();
        assert!(r.margin >= 0.0 && r.satisfied);
    }

    #[test]
    fn familiar_form_has_same_margin() {
        let (sx, sy, _) = pauli();
        let st = psi1(1.1, 0.3);
        let (s, t) = (c(0.3, 0.4), c(-0.2, 0.5));
        let a = gur_full(&st, &sx, &sy, s, t).unwrap();
        let b = gur_familiar(&st, &sx, &sy, s, t).unwrap();
        assert!((a.margin - b.margin).abs() < 1e-13);
    }

    #[test]
    fn first_order_examples() {
        let (sx, sy, _) = pauli();
        let st = psi1(1.1, 0.3);
        assert!(first_order_identity(&st, &sx, &sy, c(0.3, 0.4), c(-0.2, 0.5)).unwrap() < 1e-15);
        let (l, r) = first_order_sides(&st, &sx, &sy, c(0.0, 0.4), c(0.0, -0.5)).unwrap();
        assert!(l.norm() < 1e-15 && r.norm() < 1e-15);
        let id = Observable::new(CMatrix::identity(2)).unwrap();
        let (l, r) = first_order_sides(&st, &id, &id, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((l - c(4.0, 0.0)).norm() < 1e-15 && (r - c(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn variance_ur_examples() {
        let (sx, sy, _) = pauli();
        let up = qubit_up();
        let r = variance_ur(&up, &sx, &sx, c(0.1, 0.0), c(0.1, 0.0)).unwrap();
        assert!((r.lhs - 0.02).abs() < 1e-15 && (r.rhs - 0.02).abs() < 1e-15);
        assert!(r.margin.abs() < 1e-15);
        // rhs = 2 Re[st k11 + st <[sx,sy]>/2] with k11 = 0, <[sx,sy]> = 2i
        let r = variance_ur(&up, &sx, &sy, c(0.1, 0.0), c(0.0, 0.1)).unwrap();
        assert!((r.rhs - 2.0 * (c(0.0, 0.01) * c(0.0, 1.0)).re).abs() < 1e-15);
        assert!((r.rhs + 0.02).abs() < 1e-15);
        let r = variance_ur(&psi1(0.5, 0.5), &sx, &sy, c(0.0, 0.0), c(0.05, 0.02)).unwrap();
        assert_eq!(r.rhs, 0.0);
        assert!(r.lhs >= 0.0 && r.warnings.is_empty());
    }

    #[test]
    fn variance_optimal_examples() {
        let (sx, sy, _) = pauli();
        let r = variance_ur_optimal(&qubit_up(), &sx, &sy).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14 && (r.rhs - 2.0).abs() < 1e-14);
        let (lx, ly, _) = angular_momenta_l1();
        let r = variance_ur_optimal(&psi2(), &lx, &ly).unwrap();
        assert!(r.rhs.abs() < 1e-12);
        let st = psi1(0.9, 0.2);
        let r = variance_ur_optimal(&st, &sx, &sx).unwrap();
        let v = cumulants_single(&st, &sx).unwrap().k2;
        assert!((r.lhs - 2.0 * v).abs() < 1e-14 && (r.rhs - 2.0 * v).abs() < 1e-14);
    }

    #[test]
    fn variance_optimal_matches_schrodinger_closed_form() {
        let (sx, _, sz) = pauli();
        let st = psi1(1.3, 0.7);
        let y = sx.linear_combination(0.6, &sz, 0.8).unwrap();
        let r = variance_ur_optimal(&st, &sx, &y).unwrap();
        let sch = schrodinger(&st, &sx, &y).unwrap();
        assert!((r.lhs.powi(2) / 4.0 - sch.lhs).abs() < 1e-13);
        assert!((r.rhs.powi(2) / 4.0 - sch.rhs).abs() < 1e-13);
    }

    #[test]
    fn variance_optimal_degenerate_fallback() {
        let (sx, _, sz) = pauli();
        let r = variance_ur_optimal(&qubit_up(), &sz, &sx).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("variance")));
        assert!((r.s.norm() - 1.0).abs() < 1e-15 && r.s == r.t);
    }

    #[test]
    fn pearson_examples() {
        let (sx, sy, sz) = pauli();
        let st = psi1(0.9, 0.2);
        assert!((pearson(&st, &sx, &sx).unwrap() - 1.0).abs() < 1e-14);
        let i2 = CMatrix::identity(2);
        let xa = Observable::new(tensor(sx.matrix(), &i2)).unwrap();
        let yb = Observable::new(tensor(&i2, sy.matrix())).unwrap();
        let prod = State::product(&psi1(0.3, 0.1), &psi1(1.2, 2.0));
        assert!(pearson(&prod, &xa, &yb).unwrap() < 1e-10);
        let (lx, ly, _) = angular_momenta_l1();
        assert!(pearson(&psi2(), &lx, &ly).unwrap() < 1e-10);
        assert!(matches!(
            pearson(&qubit_up(), &sz, &sx),
            Err(GurError::DegenerateVariance { which: "X" })
        ));
    }

    #[test]
    fn skewness_examples() {
        let (_, _, sz) = pauli();
        let st = psi1(0.8, 0.1);
        let (sx, sy, _) = pauli();
        let r = skewness_ur(&st, &sx, &sy, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        let i2 = CMatrix::identity(2);
        let za = Observable::new(tensor(sz.matrix(), &i2)).unwrap();
        let zb = Observable::new(tensor(&i2, sz.matrix())).unwrap();
        let prod = State::product(&psi1(0.3, 0.1), &psi1(1.2, 2.0));
        let r = skewness_ur(&prod, &za, &zb, c(0.05, 0.0), c(0.05, 0.0)).unwrap();
        assert!(r.rhs.abs() < 1e-15);
        assert!((r.margin - r.lhs).abs() < 1e-15 && r.lhs >= 0.0);
    }

    #[test]
    fn skewness_reduces_to_variance_skewness_for_commuting_pair() {
        let (_, _, sz) = pauli();
        let i2 = CMatrix::identity(2);
        let za = Observable::new(tensor(sz.matrix(), &i2)).unwrap();
        let zz = Observable::new(tensor(sz.matrix(), sz.matrix())).unwrap();
        let st = crate::qmat::State::pure_normalized(&[c(0.5, 0.1), c(0.2, -0.3), c(0.7, 0.0), c(-0.1, 0.4)]).unwrap();
        let eps = 0.04;
        let a = skewness_ur(&st, &za, &zz, c(eps, 0.0), c(eps, 0.0)).unwrap();
        let b = variance_skewness_ur(&st, &za, &zz, eps).unwrap();
        assert!((a.lhs / (eps * eps) - b.lhs).abs() < 1e-12);
        assert!((a.rhs / (eps * eps) - b.rhs).abs() < 1e-12);
    }

    #[test]
    fn variance_skewness_examples() {
        let (sx, _, sz) = pauli();
        let plus_x = psi1(PI / 2.0, 0.0);
        let r = variance_skewness_ur(&plus_x, &sz, &sz, 0.05).unwrap();
        assert!(r.margin.abs() < 1e-10);
        let i2 = CMatrix::identity(2);
        let xa = Observable::new(tensor(sx.matrix(), &i2)).unwrap();
        let zb = Observable::new(tensor(&i2, sz.matrix())).unwrap();
        let prod = State::product(&psi1(0.3, 0.1), &psi1(1.2, 2.0));
        let r = variance_skewness_ur(&prod, &xa, &zb, 0.1).unwrap();
        assert!(r.rhs.abs() < 1e-14);
        let r0 = variance_skewness_ur(&prod, &xa, &zb, 0.0).unwrap();
        let kx = cumulants_single(&prod, &xa).unwrap().k2;
        let kz = cumulants_single(&prod, &zb).unwrap().k2;
        assert!((r0.lhs - (kx + kz)).abs() < 1e-14);
        assert!(matches!(
            variance_skewness_ur(&qubit_up(), &sx, &sz, 0.1),
            Err(GurError::NonCommuting { .. })
        ));
    }

    #[test]
    fn classical_ur_violation_at_example_point() {
        let (sx, sy, _) = pauli();
        let one = c(1.0, 0.0);
        let r = classical_ur(&psi1(PI / 2.0, PI), &sx, &sy, one, one).unwrap();
        let (l, rr) = crate::scenarios::example1_surfaces(PI / 2.0, PI);
        assert!((r.lhs - l).abs() < 1e-10 && (r.rhs - rr).abs() < 1e-10);
        assert!((r.margin + 0.1467553829).abs() < 1e-9);
        assert!(!r.satisfied);
        let r = classical_ur(&psi1(0.4, 0.4), &sx, &sy, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(r.margin.abs() < 1e-15);
    }

    #[test]
    fn quantum_ur_examples() {
        let (sx, sy, _) = pauli();
        let one = c(1.0, 0.0);
        let r = quantum_ur(&psi1(PI / 2.0, PI), &sx, &sy, one, one).unwrap();
        assert!(r.margin > 0.0);
        let r = quantum_ur(&psi1(0.5, 0.5), &sx, &sx, c(0.3, 0.0), c(0.3, 0.0)).unwrap();
        assert!(r.margin.abs() < 1e-12);
        let g = gur_full(&psi1(1.0, 2.0), &sx, &sy, c(0.3, 0.2), c(0.5, -0.4)).unwrap();
        let q = quantum_ur(&psi1(1.0, 2.0), &sx, &sy, c(0.3, 0.2), c(0.5, -0.4)).unwrap();
        assert!((g.lhs.exp() - q.lhs).abs() < 1e-12 * q.lhs);
        assert!((g.rhs.exp() - q.rhs).abs() < 1e-12 * q.rhs);
    }

    #[test]
    fn exp_ratio_examples() {
        let (lx, ly, _) = angular_momenta_l1();
        let r = exp_ratio_ur(&psi2(), &lx, &ly, 0.0, 0.0).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        let r = exp_ratio_ur(&psi2(), &lx, &ly, 0.5, 0.5).unwrap();
        assert!(r.rhs > 1.0);
        let q = quantum_ur(&psi2(), &lx, &ly, c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        assert!(((r.lhs.ln() - r.rhs.ln()) - (q.lhs.ln() - q.rhs.ln())).abs() < 1e-10);
    }

    #[test]
    fn density_inputs_are_flagged() {
        let (sx, sy, _) = pauli();
        let rho = crate::scenarios::bloch_state([0.2, 0.1, 0.3]).unwrap();
        let r = gur_full(&rho, &sx, &sy, c(0.2, 0.1), c(0.1, 0.3)).unwrap();
        assert!(r.unproven_regime);
        assert!(!gur_full(&qubit_up(), &sx, &sy, c(0.2, 0.1), c(0.1, 0.3)).unwrap().unproven_regime);
    }

    #[test]
    fn dimension_errors() {
        let (sx, sy, _) = pauli();
        let (lx, _, _) = angular_momenta_l1();
        assert!(matches!(gur_full(&qubit_up(), &sx, &lx, c(0.1, 0.0), c(0.1, 0.0)), Err(GurError::Dimension { .. })));
        assert!(matches!(variance_ur(&psi2(), &sx, &sy, c(0.1, 0.0), c(0.1, 0.0)), Err(GurError::Dimension { .. })));
    }
}
