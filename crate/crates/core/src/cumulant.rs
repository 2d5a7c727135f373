//! Moments, cumulants and cross cumulants of observables in a state.
//!
//! Cumulants are assembled from moments with the closed polynomials
//!
//! ```text
//! k1 = <X>
//! k2 = <X^2> - <X>^2
//! k3 = <X^3> - 3<X^2><X> + 2<X>^3
//! k4 = <X^4> - 4<X^3><X> - 3<X^2>^2 + 12<X^2><X>^2 - 6<X>^4
//! k11 = <{X,Y}>/2 - <X><Y>
//! k12 = <{X,Y,Y}>/3 - (<X><Y^2> + <{X,Y}><Y>) + 2<X><Y>^2
//! ```
//!
//! with `{X,Y,Y} = XYY + YXY + YYX`; `k21` is `k12` with `X` and `Y` exchanged.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GurError, Result};
use crate::qmat::{CMatrix, Observable, State};
use crate::tolerances::Tolerances;

pub const MAX_MOMENT_ORDER: usize = 8;
pub const MAX_CUMULANT_ORDER: usize = 4;

/// `<X^n>`; the imaginary residue of a Hermitian power is discarded.
pub fn moment(state: &State, x: &Observable, n: usize) -> Result<f64> {
    if n > MAX_MOMENT_ORDER {
        return Err(GurError::InvalidOrder {
            order: n,
            max: MAX_MOMENT_ORDER,
        });
    }
    Ok(state.expect(&x.matrix().powi(n as u32))?.re)
}

/// First four moments `<X>, <X^2>, <X^3>, <X^4>`.
pub fn moments4(state: &State, x: &Observable) -> Result<[f64; 4]> {
    let m = x.matrix();
    let m2 = m.matmul(m);
    let m3 = m2.matmul(m);
    let m4 = m2.matmul(&m2);
    Ok([
        state.expect(m)?.re,
        state.expect(&m2)?.re,
        state.expect(&m3)?.re,
        state.expect(&m4)?.re,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleCumulants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

impl SingleCumulants {
    pub fn from_moments([m1, m2, m3, m4]: [f64; 4]) -> Self {
        Self {
            k1: m1,
            k2: m2 - m1 * m1,
            k3: m3 - 3.0 * m2 * m1 + 2.0 * m1.powi(3),
            k4: m4 - 4.0 * m3 * m1 - 3.0 * m2 * m2 + 12.0 * m2 * m1 * m1 - 6.0 * m1.powi(4),
        }
    }

    /// `k_n` for `n` in `1..=4`.
    pub fn get(&self, n: usize) -> Result<f64> {
        match n {
            1 => Ok(self.k1),
            2 => Ok(self.k2),
            3 => Ok(self.k3),
            4 => Ok(self.k4),
            _ => Err(GurError::InvalidOrder {
                order: n,
                max: MAX_CUMULANT_ORDER,
            }),
        }
    }
}

pub fn cumulants_single(state: &State, x: &Observable) -> Result<SingleCumulants> {
    Ok(SingleCumulants::from_moments(moments4(state, x)?))
}

/// `k_n(X)` for `n` in `1..=4`.
pub fn cumulant(state: &State, x: &Observable, n: usize) -> Result<f64> {
    if n == 0 || n > MAX_CUMULANT_ORDER {
        return Err(GurError::InvalidOrder {
            order: n,
            max: MAX_CUMULANT_ORDER,
        });
    }
    cumulants_single(state, x)?.get(n)
}

/// Third-order anticommutator `{X,Y,Y} = XYY + YXY + YYX`.
pub fn anticommutator3(x: &CMatrix, y: &CMatrix) -> CMatrix {
    let xy = x.matmul(y);
    let yx = y.matmul(x);
    &(&xy.matmul(y) + &y.matmul(&xy)) + &y.matmul(&yx)
}

/// Cross cumulants of an ordered pair `(X, Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCumulants {
    pub k11: f64,
    /// one `X`, two `Y`s
    pub k12: f64,
    /// two `X`s, one `Y`
    pub k21: f64,
}

impl CrossCumulants {
    /// Cross cumulants of `(sX, tY)` for complex scalings.
    pub fn scaled(&self, s: Complex64, t: Complex64) -> ScaledCross {
        ScaledCross {
            k11: s * t * self.k11,
            k12: s * t * t * self.k12,
            k21: s * s * t * self.k21,
        }
    }
}

/// Cross cumulants of `(sX, tY)`; complex because `s`, `t` are.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCross {
    pub k11: Complex64,
    pub k12: Complex64,
    pub k21: Complex64,
}

fn k12_from(ex: f64, ey: f64, ey2: f64, exy_anti: f64, exyy_anti3: f64) -> f64 {
    exyy_anti3 / 3.0 - (ex * ey2 + exy_anti * ey) + 2.0 * ex * ey * ey
}

pub fn cross_cumulants(state: &State, x: &Observable, y: &Observable) -> Result<CrossCumulants> {
    x.matrix().check_same_dim(y.matrix())?;
    let (xm, ym) = (x.matrix(), y.matrix());
    let ex = state.expect(xm)?.re;
    let ey = state.expect(ym)?.re;
    let ex2 = state.expect(&xm.matmul(xm))?.re;
    let ey2 = state.expect(&ym.matmul(ym))?.re;
    let anti = state.expect(&xm.anticommutator(ym))?.re;
    let xyy = state.expect(&anticommutator3(xm, ym))?.re;
    let yxx = state.expect(&anticommutator3(ym, xm))?.re;
    Ok(CrossCumulants {
        k11: 0.5 * anti - ex * ey,
        k12: k12_from(ex, ey, ey2, anti, xyy),
        k21: k12_from(ey, ex, ex2, anti, yxx),
    })
}

/// Single-variable cumulants of both observables plus their cross cumulants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CumulantTable {
    pub x: SingleCumulants,
    pub y: SingleCumulants,
    pub cross: CrossCumulants,
}

impl CumulantTable {
    pub fn compute(state: &State, x: &Observable, y: &Observable) -> Result<Self> {
        Ok(Self {
            x: cumulants_single(state, x)?,
            y: cumulants_single(state, y)?,
            cross: cross_cumulants(state, x, y)?,
        })
    }
}

/// Real interval `|s| < log 2 / sigma_max` on which the cumulant series of
/// `log <e^{sX}>` converges for every state.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ConvergenceRadius(f64);

impl ConvergenceRadius {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn contains(self, s: f64) -> bool {
        s.abs() < self.0
    }
}

pub fn convergence_radius(x: &Observable) -> Result<ConvergenceRadius> {
    if x.sigma_max() < Tolerances::default().zero_observable {
        return Err(GurError::ZeroObservable);
    }
    Ok(ConvergenceRadius(std::f64::consts::LN_2 / x.sigma_max()))
}

/// Value of the cumulant generating function, with a flag recording whether
/// `Re s` lies inside the convergence radius. Leaving the radius is not an
/// error: the scalar logarithm is still defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cgf {
    pub value: Complex64,
    pub within_radius: bool,
}

/// `K(sX) = log <e^{sX}>` with the principal branch of the scalar logarithm.
pub fn cgf(state: &State, x: &Observable, s: Complex64) -> Result<Cgf> {
    let m = state.expect(&x.exp_scaled(s))?;
    let mag = m.norm();
    if mag < Tolerances::default().zero_expectation {
        return Err(GurError::ZeroExpectation(mag));
    }
    let within_radius = s.re.abs() * x.sigma_max() < std::f64::consts::LN_2;
    Ok(Cgf {
        value: m.ln(),
        within_radius,
    })
}

/// Truncated cumulant series `sum_{m=1}^{order} s^m k_m / m!`.
pub fn cgf_series(state: &State, x: &Observable, s: Complex64, order: usize) -> Result<Complex64> {
    if order > MAX_CUMULANT_ORDER {
        return Err(GurError::InvalidOrder {
            order,
            max: MAX_CUMULANT_ORDER,
        });
    }
    let k = cumulants_single(state, x)?;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    let mut factorial = 1.0;
    for m in 1..=order {
        power *= s;
        factorial *= m as f64;
        acc += power * k.get(m)? / factorial;
    }
    Ok(acc)
}

/// `k_n(sX + tY) - [s^n k_n(X) + t^n k_n(Y)]` for commuting `X`, `Y`.
///
/// Vanishes for statistically independent observables.
pub fn linearization_defect(
    state: &State,
    x: &Observable,
    y: &Observable,
    s: f64,
    t: f64,
    n: usize,
) -> Result<f64> {
    x.matrix().check_same_dim(y.matrix())?;
    if n == 0 || n > MAX_CUMULANT_ORDER {
        return Err(GurError::InvalidOrder {
            order: n,
            max: MAX_CUMULANT_ORDER,
        });
    }
    let norm = x.matrix().commutator(y.matrix()).norm_2();
    if norm > Tolerances::default().commutation {
        return Err(GurError::NonCommuting { norm });
    }
    if y.matrix().is_zero() || t == 0.0 {
        return Ok(0.0);
    }
    let sum = x.linear_combination(s, y, t)?;
    let joint = cumulant(state, &sum, n)?;
    let kx = cumulant(state, x, n)?;
    let ky = cumulant(state, y, n)?;
    Ok(joint - (s.powi(n as i32) * kx + t.powi(n as i32) * ky))
}
