//! Finite-difference extraction of Taylor coefficients, used as an
//! independent check on the coefficient assemblies in [`crate::bch`] and
//! the truncated relations in [`crate::gur`].

use num_complex::Complex64;

use crate::error::{GurError, Result};
use crate::gur::gur_full;
use crate::qmat::{Observable, State};

/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-3;

/// Second and third Taylor coefficients `g''(0)/2` and `g'''(0)/6` of a
/// smooth function of one real variable, from central differences at
/// steps `h` and `2h` combined by Richardson extrapolation.
pub fn taylor_23<F>(g: F, h: f64) -> Result<(Complex64, Complex64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut v = [Complex64::new(0.0, 0.0); 9];
    for (k, slot) in v.iter_mut().enumerate() {
        *slot = g((k as f64 - 4.0) * h)?;
    }
    // v[4 + j] = g(j h), j = -4..=4
    let at = |j: i32| v[(4 + j) as usize];
    let d2 = |m: i32, step: f64| (at(m) - 2.0 * at(0) + at(-m)) / (step * step);
    let d3 = |m: i32, step: f64| (at(2 * m) - 2.0 * at(m) + 2.0 * at(-m) - at(-2 * m)) / (2.0 * step.powi(3));
    let second = (4.0 * d2(1, h) - d2(2, 2.0 * h)) / 3.0;
    let third = (4.0 * d3(1, h) - d3(2, 2.0 * h)) / 3.0;
    if !(second.re.is_finite() && second.im.is_finite() && third.re.is_finite() && third.im.is_finite()) {
        return Err(GurError::NonFinite);
    }
    Ok((second / 2.0, third / 6.0))
}

/// `log <e^{sX} e^{tY}>` with the exponentials taken spectrally.
pub fn log_product_expectation(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<Complex64> {
    let m = x.exp_scaled(s).matmul(&y.exp_scaled(t));
    let e = state.expect(&m)?;
    if e.norm() < crate::Tolerances::default().zero_expectation {
        return Err(GurError::ZeroExpectation(e.norm()));
    }
    Ok(e.ln())
}

/// Coefficients of `lambda^2` and `lambda^3` in `K(Z_{lambda s, lambda t})`.
pub fn k_coefficients(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64, h: f64) -> Result<(Complex64, Complex64)> {
    taylor_23(|l| log_product_expectation(state, x, y, s * l, t * l), h)
}

/// Coefficients of `lambda^2` and `lambda^3` in the margin of the full
/// relation along `(lambda s, lambda t)`.
pub fn gur_margin_coefficients(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64, h: f64) -> Result<(f64, f64)> {
    let (c2, c3) = taylor_23(
        |l| gur_full(state, x, y, s * l, t * l).map(|r| Complex64::new(r.margin, 0.0)),
        h,
    )?;
    Ok((c2.re, c3.re))
}
