//! Baker-Campbell-Hausdorff terms of `Z_st = log(e^{sX} e^{tY})` through
//! fifth order, the exact `Z_st` from the matrix logarithm, and the second
//! and third order Taylor coefficients of `K(Z_st) = log <e^{Z_st}>`.

use num_complex::Complex64;

use crate::cumulant::{cross_cumulants, cumulants_single};
use crate::error::{GurError, Result};
use crate::qmat::{mat_log_principal, CMatrix, Observable, State};

/// Nested-commutator terms of the BCH series at fixed `(s, t)`, each carrying
/// its rational coefficient. Subscripts count the `sX` and `tY` factors.
#[derive(Debug, Clone)]
pub struct BchTerms {
    /// `sX + tY`
    pub z1: CMatrix,
    /// `1/2 [sX, tY]`
    pub z11: CMatrix,
    /// `1/12 [sX, [sX, tY]]`
    pub z21: CMatrix,
    /// `1/12 [tY, [tY, sX]]`
    pub z12: CMatrix,
    /// `-1/24 [tY, [sX, [sX, tY]]]`
    pub z22: CMatrix,
    /// `-1/720 [[[[sX, tY], tY], tY], tY]`
    pub z14: CMatrix,
    /// `-1/720 [[[[tY, sX], sX], sX], sX]`
    pub z41: CMatrix,
    /// `1/360 [[[[sX, tY], tY], tY], sX]`
    pub z23_1: CMatrix,
    /// `1/360 [[[[tY, sX], sX], sX], tY]`
    pub z32_1: CMatrix,
    /// `1/120 [[[[tY, sX], tY], sX], tY]`
    pub z23_2: CMatrix,
    /// `1/120 [[[[sX, tY], sX], tY], sX]`
    pub z32_2: CMatrix,
}

impl BchTerms {
    /// `(name, total order, term)` for every term.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, usize, &CMatrix)> {
        [
            ("z1", 1, &self.z1),
            ("z11", 2, &self.z11),
            ("z21", 3, &self.z21),
            ("z12", 3, &self.z12),
            ("z22", 4, &self.z22),
            ("z14", 5, &self.z14),
            ("z41", 5, &self.z41),
            ("z23_1", 5, &self.z23_1),
            ("z32_1", 5, &self.z32_1),
            ("z23_2", 5, &self.z23_2),
            ("z32_2", 5, &self.z32_2),
        ]
        .into_iter()
    }
}

pub fn bch_terms(x: &CMatrix, y: &CMatrix, s: Complex64, t: Complex64) -> Result<BchTerms> {
    x.check_same_dim(y)?;
    let a = x.scale(s);
    let b = y.scale(t);
    let br = |p: &CMatrix, q: &CMatrix| p.commutator(q);
    let ab = br(&a, &b);
    let ba = br(&b, &a);

    let ab_b = br(&ab, &b);
    let ab_b_b = br(&ab_b, &b);
    let ba_a = br(&ba, &a);
    let ba_a_a = br(&ba_a, &a);

    Ok(BchTerms {
        z1: &a + &b,
        z11: ab.scale_re(0.5),
        z21: br(&a, &ab).scale_re(1.0 / 12.0),
        z12: br(&b, &ba).scale_re(1.0 / 12.0),
        z22: br(&b, &br(&a, &ab)).scale_re(-1.0 / 24.0),
        z14: br(&ab_b_b, &b).scale_re(-1.0 / 720.0),
        z41: br(&ba_a_a, &a).scale_re(-1.0 / 720.0),
        z23_1: br(&ab_b_b, &a).scale_re(1.0 / 360.0),
        z32_1: br(&ba_a_a, &b).scale_re(1.0 / 360.0),
        z23_2: br(&br(&br(&ba, &b), &a), &b).scale_re(1.0 / 120.0),
        z32_2: br(&br(&br(&ab, &a), &b), &a).scale_re(1.0 / 120.0),
    })
}

/// Sum of all terms of total order `<= max_order` (1 through 5).
pub fn bch_partial_sum(terms: &BchTerms, max_order: usize) -> Result<CMatrix> {
    if !(1..=5).contains(&max_order) {
        return Err(GurError::InvalidOrder {
            order: max_order,
            max: 5,
        });
    }
    Ok(terms
        .iter()
        .filter(|(_, order, _)| *order <= max_order)
        .map(|(_, _, m)| m.clone())
        .sum())
}

/// `e^{sX} e^{tY}` through the spectral decompositions of `X` and `Y`.
pub fn exp_product(x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<CMatrix> {
    x.matrix().check_same_dim(y.matrix())?;
    Ok(x.exp_scaled(s).matmul(&y.exp_scaled(t)))
}

/// `Z_st = log(e^{sX} e^{tY})`, principal branch.
pub fn z_exact(x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<CMatrix> {
    mat_log_principal(&exp_product(x, y, s, t)?)
}

pub(crate) const Z11_COEFFICIENT: f64 = 0.5;

/// Second-order part of `K(Z_st)`:
///
/// ```text
/// K2 = st <[X,Y]>/2 + [k2(sX) + k2(tY) + 2 k11(sX, tY)] / 2
/// ```
pub fn k2_coefficient(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<Complex64> {
    k2_coefficient_with(state, x, y, s, t, Z11_COEFFICIENT)
}

pub(crate) fn k2_coefficient_with(
    state: &State,
    x: &Observable,
    y: &Observable,
    s: Complex64,
    t: Complex64,
    z11_coefficient: f64,
) -> Result<Complex64> {
    let kx = cumulants_single(state, x)?;
    let ky = cumulants_single(state, y)?;
    let cross = cross_cumulants(state, x, y)?.scaled(s, t);
    let comm = state.expect(&x.matrix().commutator(y.matrix()))?;
    Ok(s * t * comm * z11_coefficient + (s * s * kx.k2 + t * t * ky.k2 + 2.0 * cross.k11) / 2.0)
}

/// `<Z11> + (<Z1^2> - <Z1>^2)/2` straight from the BCH terms.
pub fn k2_from_terms(state: &State, terms: &BchTerms) -> Result<Complex64> {
    let z1 = state.expect(&terms.z1)?;
    let z1sq = state.expect(&terms.z1.matmul(&terms.z1))?;
    Ok(state.expect(&terms.z11)? + (z1sq - z1 * z1) / 2.0)
}

/// Third-order part of `K(Z_st)`:
///
/// ```text
/// K3 = (<[sX,[sX,tY]]> + <[tY,[tY,sX]]>)/12
///    + (<{Z1, [sX,tY]}> - 2 <Z1><[sX,tY]>)/4
///    + k3(sX + tY)/6
/// k3(sX + tY) = k3(sX) + 3 k12(sX,tY) + 3 k21(sX,tY) + k3(tY)
/// ```
pub fn k3_coefficient(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Result<Complex64> {
    k3_coefficient_with(state, x, y, s, t, Z11_COEFFICIENT)
}

pub(crate) fn k3_coefficient_with(
    state: &State,
    x: &Observable,
    y: &Observable,
    s: Complex64,
    t: Complex64,
    z11_coefficient: f64,
) -> Result<Complex64> {
    let terms = bch_terms(x.matrix(), y.matrix(), s, t)?;
    let kx = cumulants_single(state, x)?;
    let ky = cumulants_single(state, y)?;
    let cross = cross_cumulants(state, x, y)?.scaled(s, t);

    let nested = state.expect(&(&terms.z21 + &terms.z12))?;
    // Z11 with the coefficient made explicit
    let z11 = x.matrix().scale(s).commutator(&y.matrix().scale(t)).scale_re(z11_coefficient);
    let sym = state.expect(&terms.z1.anticommutator(&z11))? - 2.0 * state.expect(&terms.z1)? * state.expect(&z11)?;
    let k3_sum = s * s * s * kx.k3 + 3.0 * cross.k12 + 3.0 * cross.k21 + t * t * t * ky.k3;
    Ok(nested + sym / 2.0 + k3_sum / 6.0)
}
