//! Concrete systems: Pauli algebra, spin-1 angular momentum, two-qubit
//! collective spins, Werner states and the CHSH-type operator `S`.
//!
//! Conventions: the qubit basis is `(|+>, |->)` with `sigma_z |+> = |+>`; the
//! spin-1 basis is ordered `(|1>, |0>, |-1>)`; `hbar = 1`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::cumulant::{cumulants_single, moments4};
use crate::error::{GurError, Result};
use crate::gur::{GurReport, Inequality};
use crate::qmat::{tensor, CMatrix, Observable, State};
use crate::scan::maximize_1d;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn sigma_y() -> CMatrix {
    CMatrix::new(2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
}

pub fn sigma_z() -> CMatrix {
    CMatrix::diag(&[1.0, -1.0])
}

/// `(sigma_x, sigma_y, sigma_z)` as observables.
pub fn pauli() -> (Observable, Observable, Observable) {
    (
        Observable::new(sigma_x()).unwrap(),
        Observable::new(sigma_y()).unwrap(),
        Observable::new(sigma_z()).unwrap(),
    )
}

/// `|+>`, the `sigma_z = +1` eigenstate.
pub fn qubit_up() -> State {
    State::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
}

pub fn qubit_down() -> State {
    State::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap()
}

/// Qubit state with Bloch vector `r`, `|r| <= 1`; pure when `|r| = 1`.
pub fn bloch_state(r: [f64; 3]) -> Result<State> {
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if (len - 1.0).abs() < 1e-14 {
        let theta = r[2].clamp(-1.0, 1.0).acos();
        let phi = r[1].atan2(r[0]);
        return Ok(psi1(theta, phi));
    }
    let rho = &(&CMatrix::identity(2)
        + &(&(&sigma_x().scale_re(r[0]) + &sigma_y().scale_re(r[1])) + &sigma_z().scale_re(r[2])))
        * 0.5;
    State::density(rho)
}

/// `cos(theta/2)|+> + e^{i phi} sin(theta/2)|->`
pub fn psi1(theta: f64, phi: f64) -> State {
    let a = c((theta / 2.0).cos(), 0.0);
    let b = Complex64::from_polar((theta / 2.0).sin(), phi);
    State::pure_normalized(&[a, b]).unwrap()
}

/// `(|1> + |0> + |-1>) / sqrt(3)` of a spin-1 system.
pub fn psi2() -> State {
    let a = c(1.0 / 3f64.sqrt(), 0.0);
    State::pure_normalized(&[a, a, a]).unwrap()
}

/// Singlet `(|+-> - |-+>) / sqrt(2)`.
pub fn psi3() -> State {
    State::pure_normalized(&[
        c(0.0, 0.0),
        c(FRAC_1_SQRT_2, 0.0),
        c(-FRAC_1_SQRT_2, 0.0),
        c(0.0, 0.0),
    ])
    .unwrap()
}

/// Both sides of the classical exponential relation for `psi1(theta, phi)`,
/// `X = sigma_x`, `Y = sigma_y`, `s = t = 1`, in closed form.
pub fn example1_surfaces(theta: f64, phi: f64) -> (f64, f64) {
    let (c2, s2) = (2f64.cosh(), 2f64.sinh());
    let r2 = 2f64.sqrt();
    let lhs = (c2 + phi.cos() * theta.sin() * s2) * (c2 + phi.sin() * theta.sin() * s2);
    let inner = r2 * r2.cosh() + theta.sin() * (phi.cos() + phi.sin()) * r2.sinh();
    (lhs, 0.5 * inner * inner)
}

/// Spin-1 `(Lx, Ly, Lz)` in the `(|1>, |0>, |-1>)` basis.
pub fn angular_momenta_l1() -> (Observable, Observable, Observable) {
    let r = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let lx = CMatrix::from_real(3, &[0.0, r, 0.0, r, 0.0, r, 0.0, r, 0.0]).unwrap();
    let ly = CMatrix::new(
        3,
        &[z, c(0.0, -r), z, c(0.0, r), z, c(0.0, -r), z, c(0.0, r), z],
    )
    .unwrap();
    let lz = CMatrix::diag(&[1.0, 0.0, -1.0]);
    (
        Observable::new(lx).unwrap(),
        Observable::new(ly).unwrap(),
        Observable::new(lz).unwrap(),
    )
}

fn collective(p: &CMatrix) -> Observable {
    let i2 = CMatrix::identity(2);
    Observable::new(&tensor(p, &i2) + &tensor(&i2, p)).unwrap()
}

/// `A = sx(x)1 + 1(x)sx`, and likewise `B` for `sigma_y`, `C` for `sigma_z`.
pub fn collective_observables() -> (Observable, Observable, Observable) {
    (
        collective(&sigma_x()),
        collective(&sigma_y()),
        collective(&sigma_z()),
    )
}

/// `k2(A) + k2(B) + k2(C)`; at least 2 for separable two-qubit states.
pub fn collective_variance_sum(state: &State) -> Result<f64> {
    let (a, b, cc) = collective_observables();
    Ok(cumulants_single(state, &a)?.k2 + cumulants_single(state, &b)?.k2 + cumulants_single(state, &cc)?.k2)
}

/// Lower bound on `collective_variance_sum` obeyed by separable states.
pub const SEPARABLE_BOUND: f64 = 2.0;

/// Qubit zeta-bound data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaBound {
    /// `zeta_1 = (|<sx><sy>|^2 + <sz>^2)^{1/2}` and cyclic permutations.
    pub zeta: [f64; 3],
    pub sum: f64,
    /// `k2(sx) + k2(sy) + k2(sz)`
    pub k2_sum: f64,
    /// The `>= 1` part of the chain is only established for pure states.
    pub pure: bool,
    /// `k2_sum >= sum >= 1` within tolerance.
    pub holds: bool,
}

fn pauli_means(state: &State) -> Result<[f64; 3]> {
    if state.dim() != 2 {
        return Err(GurError::Dimension {
            expected: 2,
            found: state.dim(),
        });
    }
    Ok([
        state.expect(&sigma_x())?.re,
        state.expect(&sigma_y())?.re,
        state.expect(&sigma_z())?.re,
    ])
}

fn zetas(m: [f64; 3]) -> [f64; 3] {
    let [x, y, z] = m;
    [
        ((x * y).powi(2) + z * z).sqrt(),
        ((y * z).powi(2) + x * x).sqrt(),
        ((z * x).powi(2) + y * y).sqrt(),
    ]
}

pub fn zeta_bound(state: &State) -> Result<ZetaBound> {
    let m = pauli_means(state)?;
    let zeta = zetas(m);
    let sum = zeta.iter().sum();
    let k2_sum = m.iter().map(|v| 1.0 - v * v).sum();
    let tol = 1e-10;
    Ok(ZetaBound {
        zeta,
        sum,
        k2_sum,
        pure: state.is_pure(),
        holds: k2_sum >= sum - tol && sum >= 1.0 - tol,
    })
}

/// Weighted qubit variance relation over the pairs `(sx, sy)`, `(sy, sz)`,
/// `(sz, sx)`:
///
/// ```text
/// sum_i |s_i|^2 k2(P_i) + |t_i|^2 k2(P_{i+1}) >= 2 sum_i |s_i t_i| zeta_i
/// ```
///
/// The phases of `s_i`, `t_i` are taken to be optimal, so only magnitudes
/// enter. The report's `s`, `t` fields carry the first pair.
pub fn weighted_zeta_report(state: &State, weights: [(Complex64, Complex64); 3]) -> Result<GurReport> {
    let m = pauli_means(state)?;
    let zeta = zetas(m);
    let k2 = m.map(|v| 1.0 - v * v);
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (i, (s, t)) in weights.iter().enumerate() {
        lhs += s.norm_sqr() * k2[i] + t.norm_sqr() * k2[(i + 1) % 3];
        rhs += 2.0 * s.norm() * t.norm() * zeta[i];
    }
    let mut report = GurReport::new(Inequality::WeightedZeta, lhs, rhs, weights[0].0, weights[0].1);
    report.unproven_regime = !state.is_pure();
    Ok(report)
}

/// Weights with `|s_i| = |t_i| = eps_i` and `eps_i^2` proportional to
/// `zeta_i`, normalized so that `sum eps_i^4 = scale^2`. With these the
/// right-hand side equals `2 sqrt(sum eps_i^4 * sum zeta_i^2)`.
pub fn optimal_zeta_weights(zeta: [f64; 3], scale: f64) -> [(Complex64, Complex64); 3] {
    let norm = zeta.iter().map(|z| z * z).sum::<f64>().sqrt();
    zeta.map(|z| {
        let eps2 = if norm > 0.0 { scale * z / norm } else { scale / 3f64.sqrt() };
        let e = c(eps2.sqrt(), 0.0);
        (e, e)
    })
}

/// `(zeta_1, zeta_2, zeta_3)` of a qubit state.
pub fn zeta_values(state: &State) -> Result<[f64; 3]> {
    Ok(zetas(pauli_means(state)?))
}

/// Two-qubit Werner state `(1-eta)/4 * 1 + eta |psi3><psi3|`.
#[derive(Debug, Clone)]
pub struct WernerState {
    pub eta: f64,
    pub rho: State,
}

pub fn werner(eta: f64) -> Result<WernerState> {
    if !(-1.0 / 3.0..=1.0).contains(&eta) {
        return Err(GurError::EtaOutOfRange(eta));
    }
    let singlet = psi3().density_matrix();
    let rho = &CMatrix::identity(4).scale_re((1.0 - eta) / 4.0) + &singlet.scale_re(eta);
    Ok(WernerState {
        eta,
        rho: State::density(rho)?,
    })
}

/// `S = X(x)Y - X(x)Y' + X'(x)Y + X'(x)Y'` with `X = sz`, `X' = sx`,
/// `Y = sin(theta) sx + cos(theta) sz`, `Y' = cos(theta) sx - sin(theta) sz`.
#[derive(Debug, Clone)]
pub struct ChshOperator {
    pub theta: f64,
    pub s: Observable,
}

pub fn chsh_operator(theta: f64) -> ChshOperator {
    let (sx, sz) = (sigma_x(), sigma_z());
    let (st, ct) = theta.sin_cos();
    let y = &sx.scale_re(st) + &sz.scale_re(ct);
    let yp = &sx.scale_re(ct) - &sz.scale_re(st);
    let s = &(&(&tensor(&sz, &y) - &tensor(&sz, &yp)) + &tensor(&sx, &y)) + &tensor(&sx, &yp);
    ChshOperator {
        theta,
        s: Observable::new(s).expect("S is a real combination of Hermitian products"),
    }
}

/// Closed form of `k3(S)` in the Werner state:
/// `-8 eta u [-1 - 3 eta + 2 eta^2 u^2]` with `u = cos(theta) + sin(theta)`.
pub fn kappa3_s(eta: f64, theta: f64) -> Result<f64> {
    if !(-1.0 / 3.0..=1.0).contains(&eta) {
        return Err(GurError::EtaOutOfRange(eta));
    }
    let u = theta.cos() + theta.sin();
    Ok(-8.0 * eta * u * (-1.0 - 3.0 * eta + 2.0 * eta * eta * u * u))
}

/// `k3(S)` evaluated numerically from the Werner density matrix.
pub fn kappa3_s_numeric(eta: f64, theta: f64) -> Result<f64> {
    let w = werner(eta)?;
    Ok(cumulants_single(&w.rho, &chsh_operator(theta).s)?.k3)
}

/// `max_theta |k3(S)|` for the Werner state, returned as `(theta*, value)`.
pub fn max_abs_kappa3(eta: f64, tol: f64) -> Result<(f64, f64)> {
    kappa3_s(eta, 0.0)?;
    Ok(maximize_1d(
        |th| kappa3_s(eta, th).map(f64::abs).unwrap_or(f64::NAN),
        0.0,
        2.0 * std::f64::consts::PI,
        tol,
    ))
}

/// Bound on `|k3(S)|` for local hidden-variable models with `S in [-2, 2]`.
pub fn lhvt_k3_bound() -> f64 {
    8.0
}

/// Third central moment of a discrete distribution.
pub fn third_central_moment(values: &[f64], probs: &[f64]) -> f64 {
    let mean: f64 = values.iter().zip(probs).map(|(v, p)| v * p).sum();
    values.iter().zip(probs).map(|(v, p)| p * (v - mean).powi(3)).sum()
}

/// `<S>` on a state.
pub fn chsh_expectation(state: &State, theta: f64) -> Result<f64> {
    Ok(moments4(state, &chsh_operator(theta).s)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn expectation_examples() {
        let (sx, _, sz) = pauli();
        assert_eq!(qubit_up().expect(sz.matrix()).unwrap(), c(1.0, 0.0));
        // <sx> = sin(theta) cos(phi)
        let v = psi1(PI / 2.0, PI).expect(sx.matrix()).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
        let mixed = State::density(CMatrix::identity(2).scale_re(0.5)).unwrap();
        assert_eq!(mixed.expect(sx.matrix()).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn named_states() {
        assert_eq!(psi1(0.0, 1.234), qubit_up());
        let amps = psi2().amplitudes().unwrap().to_vec();
        for a in amps {
            assert!((a.re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        let (a, b, cc) = collective_observables();
        for o in [&a, &b, &cc] {
            let k = cumulants_single(&psi3(), o).unwrap();
            assert!(k.k1.abs() < 1e-15 && k.k2.abs() < 1e-15);
        }
        let annihilated = psi3().apply(a.matrix()).unwrap();
        assert!(annihilated.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn angular_momentum_algebra() {
        let (lx, ly, lz) = angular_momenta_l1();
        let comm = lx.matrix().commutator(ly.matrix());
        assert!(comm.approx_eq(&lz.matrix().scale(c(0.0, 1.0)), 1e-14));
        for o in [&lx, &ly, &lz] {
            let ev = o.eigenvalues();
            for (got, want) in ev.iter().zip([-1.0, 0.0, 1.0]) {
                assert!((got - want).abs() < 1e-14);
            }
        }
        assert!(psi2().expect(&comm).unwrap().norm() < 1e-15);
    }

    #[test]
    fn example1_closed_forms() {
        let (l, r) = example1_surfaces(PI / 2.0, PI);
        // (cosh 2 - sinh 2) cosh 2 = (1 + e^-4) / 2
        assert!((l - (1.0 + (-4f64).exp()) / 2.0).abs() < 1e-14);
        assert!((l - 0.5091578194).abs() < 1e-9);
        assert!((r - 0.6559132023).abs() < 1e-9);
        let (l, r) = example1_surfaces(0.0, 0.0);
        assert!((l - 2f64.cosh().powi(2)).abs() < 1e-12);
        assert!((r - 2f64.sqrt().cosh().powi(2)).abs() < 1e-12);
        let (l1, r1) = example1_surfaces(1.1, 0.3);
        let (l2, r2) = example1_surfaces(1.1, PI / 2.0 - 0.3);
        assert!((l1 - l2).abs() < 1e-12 && (r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn collective_sum_examples() {
        assert!(collective_variance_sum(&psi3()).unwrap().abs() < 1e-12);
        let prod = State::product(&qubit_up(), &qubit_up());
        assert!(collective_variance_sum(&prod).unwrap() >= 2.0 - 1e-10);
    }

    #[test]
    fn zeta_examples() {
        let z = zeta_bound(&qubit_up()).unwrap();
        assert_eq!(z.zeta, [1.0, 0.0, 0.0]);
        assert_eq!(z.k2_sum, 2.0);
        assert!(z.holds && z.pure);
        let mixed = State::density(CMatrix::identity(2).scale_re(0.5)).unwrap();
        let z = zeta_bound(&mixed).unwrap();
        assert_eq!(z.sum, 0.0);
        assert!(!z.holds && !z.pure);
        let plus_x = bloch_state([1.0, 0.0, 0.0]).unwrap();
        let z = zeta_bound(&plus_x).unwrap();
        assert!((z.zeta[1] - 1.0).abs() < 1e-15 && z.zeta[0].abs() < 1e-15);
        assert!((z.k2_sum - 2.0).abs() < 1e-15);
        assert!(zeta_bound(&psi2()).is_err());
    }

    #[test]
    fn weighted_zeta_examples() {
        let st = psi1(1.0, 0.5);
        let one = c(1.0, 0.0);
        let r = weighted_zeta_report(&st, [(one, one); 3]).unwrap();
        let zb = zeta_bound(&st).unwrap();
        assert!((r.lhs - 2.0 * zb.k2_sum).abs() < 1e-14);
        assert!((r.rhs - 2.0 * zb.sum).abs() < 1e-14);

        let zero = c(0.0, 0.0);
        let r = weighted_zeta_report(&st, [(c(0.3, 0.0), c(0.0, 0.2)), (zero, zero), (zero, zero)]).unwrap();
        let (sx, sy, _) = pauli();
        let single = crate::gur::variance_ur_optimal_weighted(&st, &sx, &sy, 0.3, 0.2).unwrap();
        assert!((r.lhs - single.lhs).abs() < 1e-14);
        assert!((r.rhs - single.rhs).abs() < 1e-12);

        let zeta = zeta_values(&qubit_up()).unwrap();
        let w = optimal_zeta_weights(zeta, 0.01);
        let r = weighted_zeta_report(&qubit_up(), w).unwrap();
        let eps4: f64 = w.iter().map(|(s, _)| s.norm().powi(4)).sum();
        assert!((r.rhs - 2.0 * eps4.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn werner_and_chsh() {
        let w1 = werner(1.0).unwrap();
        assert!(w1.rho.density_matrix().approx_eq(&psi3().density_matrix(), 1e-15));
        let w0 = werner(0.0).unwrap();
        assert!(w0.rho.density_matrix().approx_eq(&CMatrix::identity(4).scale_re(0.25), 1e-15));
        assert_eq!(werner(1.2).unwrap_err(), GurError::EtaOutOfRange(1.2));
        assert!(werner(-1.0 / 3.0).is_ok());
        let v = chsh_expectation(&psi3(), PI / 4.0).unwrap();
        assert!((v.abs() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kappa3_closed_form_examples() {
        assert_eq!(kappa3_s(0.0, 1.0).unwrap(), 0.0);
        assert!(kappa3_s(1.0, 3.0 * PI / 4.0).unwrap().abs() < 1e-14);
        for (eta, th) in [(1.0, 0.3), (0.5, 1.0), (-0.2, 2.0), (0.8, 4.0)] {
            let closed = kappa3_s(eta, th).unwrap();
            let numeric = kappa3_s_numeric(eta, th).unwrap();
            assert!((closed - numeric).abs() < 1e-10, "{eta} {th}: {closed} vs {numeric}");
        }
    }

    #[test]
    fn lhvt_examples() {
        assert_eq!(lhvt_k3_bound(), 8.0);
        assert_eq!(third_central_moment(&[-2.0, 2.0], &[0.5, 0.5]), 0.0);
        assert_eq!(third_central_moment(&[2.0], &[1.0]), 0.0);
    }
}
