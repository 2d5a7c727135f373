//! Random-instance invariant suites: nonnegativity of the full relation,
//! the first-order identity, the BCH truncation order and the Taylor
//! coefficient oracle.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bch::{bch_partial_sum, bch_terms, k2_coefficient_with, k3_coefficient_with, z_exact, Z11_COEFFICIENT};
use crate::error::Result;
use crate::gur::{first_order_identity, gur_full};
use crate::oracle::{k_coefficients, FD_STEP};
use crate::problem::ProblemFile;
use crate::qmat::{CMatrix, Observable};
use crate::random::{instance, rng, Instance, DEFAULT_SEED, MAX_OBSERVABLE_NORM};

pub const GUR_TOL: f64 = 1e-10;
pub const FIRST_ORDER_TOL: f64 = 1e-12;
pub const BCH_ORDER_RANGE: (f64, f64) = (5.3, 6.7);
pub const BCH_EPSILON: f64 = 0.05;
pub const ORACLE_TOL: f64 = 1e-6;

/// Deliberate defects for checking that the suites catch them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flip the sign of the `1/2 [sX, tY]` coefficient in the assembled
    /// second and third order coefficients.
    Z11Sign,
}

impl std::str::FromStr for Fault {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "z11-sign" => Ok(Fault::Z11Sign),
            _ => Err(format!("unknown fault {s}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub n: usize,
    pub fault: Option<Fault>,
    pub parallel: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, n: 1000, fault: None, parallel: true }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub detail: String,
    pub problem: ProblemFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Worst observed statistic: most negative margin, largest defect,
    /// fitted order farthest from 6, or largest oracle error.
    pub worst: Option<f64>,
    pub first_failure: Option<Counterexample>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub n: usize,
    pub fault: Option<Fault>,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }
}

const STREAM_GUR: u64 = 0;
const STREAM_BCH: u64 = 1 << 32;
const STREAM_ORACLE: u64 = 2 << 32;

/// Outcome of one instance: statistic and pass flag, or an error message.
type Outcome = std::result::Result<(f64, bool), String>;

fn run_suite<F>(name: &'static str, cfg: &Config, stream: u64, dims: &[usize], worse: fn(f64, f64) -> bool, check: F) -> SuiteResult
where
    F: Fn(&Instance) -> Outcome + Sync,
{
    let one = |k: usize| {
        let inst = instance(&mut rng(cfg.seed, stream + k as u64), dims);
        let out = check(&inst);
        (inst, out)
    };
    let results: Vec<(Instance, Outcome)> = if cfg.parallel {
        (0..cfg.n).into_par_iter().map(one).collect()
    } else {
        (0..cfg.n).map(one).collect()
    };
    let mut passed = 0;
    let mut worst: Option<f64> = None;
    let mut first_failure = None;
    for (k, (inst, out)) in results.into_iter().enumerate() {
        let (good, detail) = match out {
            Ok((v, good)) => {
                if worst.is_none_or(|w| worse(v, w)) {
                    worst = Some(v);
                }
                (good, format!("statistic {v:.6e}"))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if good {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some(Counterexample { index: k, detail, problem: ProblemFile::from_instance(&inst) });
        }
    }
    SuiteResult { name, passed, total: cfg.n, worst, first_failure }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Convergence of the fifth-order BCH partial sum at `s = t = eps` and
/// `eps / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BchOrder {
    /// `log2(|R(eps)| / |R(eps/2)|)` for the residual `R = Z_exact - Z_(<=5)`.
    pub fitted: f64,
    /// Norm of the sixth-order part `128 R(eps/2) - R(eps)` of `R(eps)`.
    pub sixth: f64,
    /// Norm of the remaining (seventh and higher order) part.
    pub higher: f64,
}

impl BchOrder {
    /// Order within `BCH_ORDER_RANGE`, or, when the sixth-order part of the
    /// residual is smaller than the next order (the sixth-order coefficient
    /// nearly cancels), an order between the lower bound and one above the
    /// upper bound.
    pub fn ok(&self) -> bool {
        let (lo, hi) = BCH_ORDER_RANGE;
        if !self.fitted.is_finite() || self.fitted < lo {
            return false;
        }
        self.fitted <= hi || (self.sixth < self.higher && self.fitted <= hi + 1.0)
    }
}

pub fn bch_order(x: &Observable, y: &Observable, eps: f64) -> Result<BchOrder> {
    let residual = |e: f64| -> Result<CMatrix> {
        let exact = z_exact(x, y, real(e), real(e))?;
        let terms = bch_terms(x.matrix(), y.matrix(), real(e), real(e))?;
        Ok(&exact - &bch_partial_sum(&terms, 5)?)
    };
    let r1 = residual(eps)?;
    let r2 = residual(eps / 2.0)?;
    let sixth = &r2.scale_re(128.0) - &r1;
    Ok(BchOrder {
        fitted: (r1.norm_fro() / r2.norm_fro()).log2(),
        sixth: sixth.norm_fro(),
        higher: (&r1 - &sixth).norm_fro(),
    })
}

/// Observables rescaled to spectral norm [`MAX_OBSERVABLE_NORM`], so that
/// the residual at `eps / 2` stays well above rounding error.
pub fn at_norm_bound(x: &Observable) -> Observable {
    x.scaled(MAX_OBSERVABLE_NORM / x.sigma_max())
}

/// Largest deviation of the assembled second and third order coefficients
/// from the finite-difference oracle.
pub fn oracle_error(inst: &Instance, fault: Option<Fault>) -> Result<f64> {
    let z11 = match fault {
        Some(Fault::Z11Sign) => -Z11_COEFFICIENT,
        None => Z11_COEFFICIENT,
    };
    let (s, t) = (inst.s, inst.t);
    let k2 = k2_coefficient_with(&inst.state, &inst.x, &inst.y, s, t, z11)?;
    let k3 = k3_coefficient_with(&inst.state, &inst.x, &inst.y, s, t, z11)?;
    let (f2, f3) = k_coefficients(&inst.state, &inst.x, &inst.y, s, t, FD_STEP)?;
    Ok((k2 - f2).norm().max((k3 - f3).norm()))
}

pub fn run(cfg: &Config) -> Report {
    let gur = run_suite("gur_nonnegativity", cfg, STREAM_GUR, &[2, 3, 4], |a, b| a < b, |inst| {
        gur_full(&inst.state, &inst.x, &inst.y, inst.s, inst.t)
            .map(|r| (r.margin, r.margin >= -GUR_TOL))
            .map_err(|e| e.to_string())
    });
    let first = run_suite("first_order_identity", cfg, STREAM_GUR, &[2, 3, 4], |a, b| a > b, |inst| {
        let scale = 1.0f64.max(inst.s.norm() * inst.x.sigma_max() + inst.t.norm() * inst.y.sigma_max());
        first_order_identity(&inst.state, &inst.x, &inst.y, inst.s, inst.t)
            .map(|d| (d, d <= FIRST_ORDER_TOL * scale))
            .map_err(|e| e.to_string())
    });
    let bch = run_suite("bch_order", cfg, STREAM_BCH, &[2, 3], |a, b| (a - 6.0).abs() > (b - 6.0).abs(), |inst| {
        bch_order(&at_norm_bound(&inst.x), &at_norm_bound(&inst.y), BCH_EPSILON)
            .map(|o| (o.fitted, o.ok()))
            .map_err(|e| e.to_string())
    });
    let oracle = run_suite("taylor_oracle", cfg, STREAM_ORACLE, &[2], |a, b| a > b, |inst| {
        oracle_error(inst, cfg.fault)
            .map(|e| (e, e <= ORACLE_TOL))
            .map_err(|e| e.to_string())
    });
    Report { seed: cfg.seed, n: cfg.n, fault: cfg.fault, suites: vec![gur, first, bch, oracle] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let r = run(&Config { n: 40, ..Default::default() });
        assert_eq!(r.suites.len(), 4);
        for s in &r.suites {
            assert!(s.ok(), "{}: {:?}", s.name, s.first_failure);
        }
    }

    #[test]
    fn empty_run_is_vacuous_pass() {
        let r = run(&Config { n: 0, ..Default::default() });
        assert!(r.ok());
        assert!(r.suites.iter().all(|s| s.total == 0 && s.worst.is_none()));
    }

    #[test]
    fn injected_fault_fails_oracle_suite_only() {
        let r = run(&Config { n: 20, fault: Some(Fault::Z11Sign), ..Default::default() });
        let by_name = |n: &str| r.suites.iter().find(|s| s.name == n).unwrap();
        assert!(!by_name("taylor_oracle").ok());
        assert!(by_name("taylor_oracle").first_failure.is_some());
        assert!(by_name("gur_nonnegativity").ok() && by_name("bch_order").ok());
    }

    #[test]
    fn bch_order_for_paulis() {
        let (sx, sy, _) = crate::scenarios::pauli();
        let o = bch_order(&sx, &sy, BCH_EPSILON).unwrap();
        assert!((5.5..=6.7).contains(&o.fitted), "{o:?}");
        assert!(o.sixth > o.higher && o.ok());
    }

    #[test]
    fn bch_order_catches_wrong_truncation() {
        // dropping the fifth-order terms leaves an O(eps^5) residual
        let (sx, sy, _) = crate::scenarios::pauli();
        let e = |v: f64| Complex64::new(v, 0.0);
        let res = |v: f64| {
            let terms = bch_terms(sx.matrix(), sy.matrix(), e(v), e(v)).unwrap();
            (&z_exact(&sx, &sy, e(v), e(v)).unwrap() - &bch_partial_sum(&terms, 4).unwrap()).norm_fro()
        };
        let p = (res(BCH_EPSILON) / res(BCH_EPSILON / 2.0)).log2();
        assert!(p < BCH_ORDER_RANGE.0, "{p}");
    }

    #[test]
    fn serial_and_parallel_agree() {
        let a = run(&Config { n: 10, parallel: true, ..Default::default() });
        let b = run(&Config { n: 10, parallel: false, ..Default::default() });
        for (x, y) in a.suites.iter().zip(&b.suites) {
            assert_eq!(x.worst, y.worst);
        }
    }
}
