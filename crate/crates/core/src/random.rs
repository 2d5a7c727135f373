//! Seeded random instances: Haar pure states, Gaussian Hermitian
//! observables, commuting pairs, separable two-qubit states and discrete
//! distributions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::qmat::{tensor, CMatrix, Observable, State};

/// Default seed for the random suites.
pub const DEFAULT_SEED: u64 = 0x5eed_6a7e;
/// Upper bound on the spectral norm of sampled observables.
pub const MAX_OBSERVABLE_NORM: f64 = 2.0;

/// Generator for `stream` under `seed`. Streams are independent, so
/// instance `k` can be drawn without drawing instances `0..k`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) / std::f64::consts::SQRT_2
}

/// Haar-random pure state.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> State {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        if let Ok(s) = State::pure_normalized(&v) {
            return s;
        }
    }
}

/// `(G + G^dagger) / 2` for a complex Gaussian `G`, rescaled to spectral
/// norm uniform in `[0.2, 1] * MAX_OBSERVABLE_NORM`.
pub fn gaussian_observable<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Observable {
    loop {
        let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
        let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        let obs = Observable::new(CMatrix::from_dmatrix(h).expect("finite")).expect("hermitian");
        if obs.sigma_max() < 1e-6 {
            continue;
        }
        let target = rng.random_range(0.2..=1.0) * MAX_OBSERVABLE_NORM;
        return obs.scaled(target / obs.sigma_max());
    }
}

/// Uniform point in the disk `|z| <= radius`.
pub fn disk_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Random unitary: eigenvectors of a Gaussian Hermitian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    gaussian_observable(rng, dim).eigenvectors().clone()
}

/// Two observables diagonal in one random basis, spectra in `[-2, 2]`.
pub fn commuting_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (Observable, Observable) {
    let u = random_unitary(rng, dim);
    let build = |rng: &mut R| {
        let d: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-MAX_OBSERVABLE_NORM..=MAX_OBSERVABLE_NORM), 0.0))
            .collect();
        let m = &u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)) * u.adjoint();
        let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Observable::new(CMatrix::from_dmatrix(m).expect("finite")).expect("hermitian")
    };
    let x = build(rng);
    let y = build(rng);
    (x, y)
}

/// Random weights summing to one (flat Dirichlet).
pub fn simplex_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Product of two Haar qubit states, or a mixture of up to four of them.
pub fn separable_two_qubit<R: Rng + ?Sized>(rng: &mut R) -> State {
    let terms = rng.random_range(1..=4);
    let comps: Vec<(f64, State)> = simplex_weights(rng, terms)
        .into_iter()
        .map(|p| (p, State::product(&haar_state(rng, 2), &haar_state(rng, 2))))
        .collect();
    if terms == 1 {
        return comps.into_iter().next().unwrap().1;
    }
    State::mixture(&comps).expect("valid mixture")
}

/// Discrete distribution on `[-2, 2]` with 2 to 6 support points. Half of
/// the draws put two of the points on the interval ends.
pub fn distribution_on_interval<R: Rng + ?Sized>(rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let n = rng.random_range(2..=6);
    let mut values: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect();
    if rng.random::<bool>() {
        values[0] = -2.0;
        values[1] = 2.0;
    }
    let mut probs = simplex_weights(rng, n);
    if rng.random::<bool>() {
        // skewed: concentrate mass on one point
        let k = rng.random_range(0..n);
        let boost: f64 = rng.random_range(1.0..20.0);
        probs[k] *= boost;
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
    }
    (values, probs)
}

/// One random inequality instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub state: State,
    pub x: Observable,
    pub y: Observable,
    pub s: Complex64,
    pub t: Complex64,
}

/// Instance with dimension drawn from `dims`, Haar state, Gaussian
/// observables and `s`, `t` in the unit disk.
pub fn instance<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> Instance {
    let dim = dims[rng.random_range(0..dims.len())];
    let state = haar_state(rng, dim);
    let x = gaussian_observable(rng, dim);
    let y = gaussian_observable(rng, dim);
    let s = disk_point(rng, 1.0);
    let t = disk_point(rng, 1.0);
    Instance { state, x, y, s, t }
}

/// Local observables `X (x) I` and `I (x) Y` on two qubits.
pub fn local_pair(x: &Observable, y: &Observable) -> (Observable, Observable) {
    let ia = CMatrix::identity(x.dim());
    let ib = CMatrix::identity(y.dim());
    (
        Observable::new(tensor(x.matrix(), &ib)).expect("hermitian"),
        Observable::new(tensor(&ia, y.matrix())).expect("hermitian"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = instance(&mut rng(1, 5), &[2, 3, 4]);
        let b = instance(&mut rng(1, 5), &[2, 3, 4]);
        assert_eq!(a.state, b.state);
        assert_eq!(a.x.matrix(), b.x.matrix());
        let c = instance(&mut rng(1, 6), &[2, 3, 4]);
        assert!(a.s != c.s);
    }

    #[test]
    fn observables_are_bounded() {
        let mut r = rng(2, 0);
        for dim in 2..=4 {
            for _ in 0..50 {
                let x = gaussian_observable(&mut r, dim);
                assert!(x.sigma_max() <= MAX_OBSERVABLE_NORM + 1e-12);
                assert!(x.sigma_max() >= 0.2 * MAX_OBSERVABLE_NORM - 1e-12);
            }
        }
    }

    #[test]
    fn commuting_pairs_commute() {
        let mut r = rng(3, 0);
        for dim in 2..=4 {
            let (x, y) = commuting_pair(&mut r, dim);
            assert!(x.matrix().commutator(y.matrix()).norm_2() < 1e-12);
        }
    }

    #[test]
    fn disk_and_distributions() {
        let mut r = rng(4, 0);
        for _ in 0..200 {
            assert!(disk_point(&mut r, 1.0).norm() <= 1.0);
            let (v, p) = distribution_on_interval(&mut r);
            assert!(v.iter().all(|x| (-2.0..=2.0).contains(x)));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12 && p.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn separable_states_are_valid() {
        let mut r = rng(5, 0);
        for _ in 0..20 {
            let st = separable_two_qubit(&mut r);
            assert_eq!(st.dim(), 4);
            let tr = st.density_matrix().trace();
            assert!((tr.re - 1.0).abs() < 1e-12);
        }
    }
}
