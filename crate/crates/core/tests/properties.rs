use gurlab::bch::{bch_partial_sum, bch_terms, z_exact};
use gurlab::cumulant::{cgf, cumulants_single};
use gurlab::gur::{
    classical_ur, gur_full, pearson, quantum_ur, robertson, schrodinger, variance_ur, variance_ur_optimal,
};
use gurlab::oracle::gur_margin_coefficients;
use gurlab::problem::ProblemFile;
use gurlab::qmat::{mat_exp, mat_log_principal, tensor};
use gurlab::random::{self, Instance};
use gurlab::scan::{self, Axis, GridSpec, SweepOptions};
use gurlab::scenarios::{pauli, zeta_bound};
use gurlab::{CMatrix, Complex64, Inequality, Observable, State};
use proptest::prelude::*;

fn inst(seed: u64, dims: &[usize]) -> Instance {
    random::instance(&mut random::rng(seed, 0), dims)
}

fn mixed(seed: u64, dim: usize) -> State {
    let mut rng = random::rng(seed, 1);
    let parts: Vec<(f64, State)> = random::simplex_weights(&mut rng, 3)
        .into_iter()
        .map(|w| (w, random::haar_state(&mut rng, dim)))
        .collect();
    State::mixture(&parts).unwrap()
}

fn cplx() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exp_of_i_hermitian_is_unitary(seed in any::<u64>(), a in -3.0..3.0f64) {
        let x = inst(seed, &[2, 3, 4]).x;
        let u = mat_exp(&x.matrix().scale(Complex64::new(0.0, a)));
        let id = CMatrix::identity(x.dim());
        prop_assert!(u.matmul(&u.adjoint()).approx_eq(&id, 1e-12));
        prop_assert!(u.approx_eq(&x.exp_scaled(Complex64::new(0.0, a)), 1e-12));
    }

    #[test]
    fn log_inverts_exp_off_the_cut(seed in any::<u64>(), a in -1.4..1.4f64) {
        // spectrum of a X stays inside (-pi, pi) since sigma_max <= 2
        let x = inst(seed, &[2, 3, 4]).x;
        let z = x.matrix().scale(Complex64::new(0.3, a));
        let back = mat_log_principal(&mat_exp(&z)).unwrap();
        prop_assert!(back.approx_eq(&z, 1e-10));
    }

    #[test]
    fn tensor_is_associative_and_mixed_product(seed in any::<u64>()) {
        let mut rng = random::rng(seed, 0);
        let m: Vec<CMatrix> = (0..4).map(|_| random::gaussian_observable(&mut rng, 2).matrix().clone()).collect();
        let l = tensor(&tensor(&m[0], &m[1]), &m[2]);
        let r = tensor(&m[0], &tensor(&m[1], &m[2]));
        prop_assert!(l.approx_eq(&r, 1e-14));
        let lhs = tensor(&m[0], &m[1]).matmul(&tensor(&m[2], &m[3]));
        let rhs = tensor(&m[0].matmul(&m[2]), &m[1].matmul(&m[3]));
        prop_assert!(lhs.approx_eq(&rhs, 1e-13));
    }

    #[test]
    fn expectation_is_linear(seed in any::<u64>(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let i = inst(seed, &[2, 3, 4]);
        let comb = i.x.linear_combination(a, &i.y, b).unwrap();
        let l = i.state.expect(comb.matrix()).unwrap();
        let r = i.state.expect(i.x.matrix()).unwrap() * a + i.state.expect(i.y.matrix()).unwrap() * b;
        prop_assert!((l - r).norm() < 1e-13);
    }

    #[test]
    fn cumulants_shift_and_scale(seed in any::<u64>(), c in -3.0..3.0f64, a in -2.0..2.0f64) {
        let i = inst(seed, &[2, 3, 4]);
        let k = cumulants_single(&i.state, &i.x).unwrap();
        let ks = cumulants_single(&i.state, &i.x.shifted(c)).unwrap();
        prop_assert!((ks.k1 - k.k1 - c).abs() < 1e-12);
        prop_assert!((ks.k2 - k.k2).abs() < 1e-11);
        prop_assert!((ks.k3 - k.k3).abs() < 1e-10);
        prop_assert!((ks.k4 - k.k4).abs() < 1e-9);
        let ka = cumulants_single(&i.state, &i.x.scaled(a)).unwrap();
        for n in 1..=4 {
            let want = a.powi(n as i32) * k.get(n).unwrap();
            prop_assert!((ka.get(n).unwrap() - want).abs() < 1e-11);
        }
        prop_assert!(k.k2 >= -1e-14);
    }

    #[test]
    fn cgf_matches_spectral_sum(seed in any::<u64>(), s in -0.3..0.3f64) {
        let i = inst(seed, &[2, 3, 4]);
        let ev = i.x.eigenvalues();
        let v = i.x.eigenvectors();
        let mut direct = 0.0;
        for (j, lambda) in ev.iter().enumerate() {
            let col: Vec<Complex64> = v.column(j).iter().copied().collect();
            let p = i.state.expect(&CMatrix::outer(&col)).unwrap().re;
            direct += p * (s * lambda).exp();
        }
        let k = cgf(&i.state, &i.x, Complex64::new(s, 0.0)).unwrap();
        prop_assert!((k.value.re - direct.ln()).abs() < 1e-12);
        prop_assert!(k.value.im.abs() < 1e-12);
    }

    #[test]
    fn gur_nonnegative_pure_and_mixed(seed in any::<u64>()) {
        let i = inst(seed, &[2, 3, 4]);
        let r = gur_full(&i.state, &i.x, &i.y, i.s, i.t).unwrap();
        prop_assert!(r.margin >= -1e-10 && !r.unproven_regime);
        let rho = mixed(seed, i.x.dim());
        let r = gur_full(&rho, &i.x, &i.y, i.s, i.t).unwrap();
        prop_assert!(r.margin >= -1e-10 && r.unproven_regime);
    }

    #[test]
    fn quantum_relations_hold(seed in any::<u64>()) {
        let i = inst(seed, &[2, 3, 4]);
        prop_assert!(quantum_ur(&i.state, &i.x, &i.y, i.s, i.t).unwrap().satisfied);
        let rob = robertson(&i.state, &i.x, &i.y).unwrap();
        let sch = schrodinger(&i.state, &i.x, &i.y).unwrap();
        prop_assert!(rob.satisfied && sch.satisfied);
        prop_assert!(sch.rhs >= rob.rhs - 1e-12);
        prop_assert!(pearson(&i.state, &i.x, &i.y).map_or(true, |r| r.abs() <= 1.0 + 1e-12));
        if let Ok(r) = variance_ur_optimal(&i.state, &i.x, &i.y) {
            prop_assert!(r.margin >= -1e-10);
        }
    }

    #[test]
    fn classical_relation_holds_for_commuting_pairs(seed in any::<u64>(), s in -1.0..1.0f64, t in -1.0..1.0f64) {
        let mut rng = random::rng(seed, 0);
        let dim = [2, 3, 4][(seed % 3) as usize];
        let (x, y) = random::commuting_pair(&mut rng, dim);
        let st = random::haar_state(&mut rng, dim);
        let r = classical_ur(&st, &x, &y, Complex64::new(s, 0.0), Complex64::new(t, 0.0)).unwrap();
        prop_assert!(r.margin >= -1e-10 * (1.0 + r.lhs.abs()), "margin {}", r.margin);
    }

    #[test]
    fn variance_relation_is_second_order_gur(seed in any::<u64>(), s in cplx(), t in cplx()) {
        let i = inst(seed, &[2, 3]);
        let (c2, _) = gur_margin_coefficients(&i.state, &i.x, &i.y, s, t, 1e-3).unwrap();
        let v = variance_ur(&i.state, &i.x, &i.y, s, t).unwrap();
        prop_assert!((c2 - v.margin).abs() < 1e-6, "{} vs {}", c2, v.margin);
    }

    #[test]
    fn bch_residual_is_sixth_order(seed in any::<u64>()) {
        let i = inst(seed, &[2, 3]);
        let eps = Complex64::new(0.02, 0.0);
        let exact = z_exact(&i.x, &i.y, eps, eps).unwrap();
        let terms = bch_terms(i.x.matrix(), i.y.matrix(), eps, eps).unwrap();
        let r = (&exact - &bch_partial_sum(&terms, 5).unwrap()).norm_fro();
        prop_assert!(r < 1e-8, "residual {}", r);
    }

    #[test]
    fn zeta_chain_on_pure_qubits(seed in any::<u64>()) {
        let st = random::haar_state(&mut random::rng(seed, 0), 2);
        let z = zeta_bound(&st).unwrap();
        prop_assert!(z.pure && z.holds);
        prop_assert!(z.k2_sum >= z.sum - 1e-12 && z.sum >= 1.0 - 1e-12);
    }

    #[test]
    fn problem_file_round_trip_is_exact(seed in any::<u64>()) {
        let i = inst(seed, &[2, 3, 4]);
        let text = ProblemFile::from_instance(&i).to_json();
        let p = ProblemFile::parse(&text).unwrap().build().unwrap();
        prop_assert_eq!(p.observable("X").unwrap().matrix(), i.x.matrix());
        prop_assert_eq!(p.observable("Y").unwrap().matrix(), i.y.matrix());
        prop_assert_eq!(p.state.density_matrix(), i.state.density_matrix());
        prop_assert_eq!(p.param("s"), Some(i.s));
        prop_assert_eq!(p.param("t"), Some(i.t));
    }

    #[test]
    fn csv_numbers_round_trip_to_twelve_digits(x in prop::num::f64::NORMAL) {
        let s = gurlab::format::fmt_g(x);
        prop_assert!(!s.contains(','));
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-11 * x.abs());
    }
}

#[test]
fn parallel_and_serial_sweeps_agree() {
    let (sx, sy, _) = pauli();
    let st = random::haar_state(&mut random::rng(3, 0), 2);
    let grid = GridSpec::two(Axis::new("s_re", -1.0, 1.0, 17), Axis::new("t_im", -1.0, 1.0, 13));
    let par = scan::sweep_instance(Inequality::GurFull, &st, &sx, &sy, &grid, SweepOptions::default()).unwrap();
    let ser = scan::sweep_instance(
        Inequality::GurFull,
        &st,
        &sx,
        &sy,
        &grid,
        SweepOptions { parallel: false, ..Default::default() },
    )
    .unwrap();
    assert_eq!(par, ser);
    assert!(par.violation_cells.is_empty());
}

#[test]
fn observable_rejects_non_hermitian() {
    let m = CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
    assert!(Observable::new(m).is_err());
}
