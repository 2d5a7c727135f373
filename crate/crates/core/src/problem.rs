//! JSON problem files: a dimension, named observables, a state and named
//! complex parameters. Complex numbers are `[re, im]` pairs.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "observables": {
//!     "X": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
//!     "Y": [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]
//!   },
//!   "state": { "kind": "pure", "data": [[1, 0], [0, 0]] },
//!   "params": { "s": [1, 0], "t": [1, 0] }
//! }
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GurError, Result};
use crate::qmat::{CMatrix, Observable, State};
use crate::random::Instance;
use crate::tolerances::Tolerances;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dim: usize,
    pub observables: BTreeMap<String, Vec<Vec<Pair>>>,
    pub state: StateSpec,
    #[serde(default)]
    pub params: BTreeMap<String, Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Pure { data: Vec<Pair> },
    Density { data: Vec<Vec<Pair>> },
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub state: State,
    pub observables: BTreeMap<String, Observable>,
    pub params: BTreeMap<String, Complex64>,
}

impl Problem {
    pub fn observable(&self, name: &str) -> Result<&Observable> {
        self.observables.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.observables.keys().map(String::as_str).collect();
            GurError::Problem(format!("observables.{name}: not defined (have: {})", known.join(", ")))
        })
    }

    pub fn param(&self, name: &str) -> Option<Complex64> {
        self.params.get(name).copied()
    }
}

fn c(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn field_err(field: &str, e: impl std::fmt::Display) -> GurError {
    GurError::Problem(format!("{field}: {e}"))
}

fn matrix(field: &str, dim: usize, rows: &[Vec<Pair>]) -> Result<CMatrix> {
    if rows.len() != dim {
        return Err(field_err(field, format!("expected {dim} rows, found {}", rows.len())));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(field_err(&format!("{field}[{i}]"), format!("expected {dim} entries, found {}", row.len())));
        }
        entries.extend(row.iter().copied().map(c));
    }
    CMatrix::new(dim, &entries).map_err(|e| field_err(field, e))
}

fn rows(m: &CMatrix) -> Vec<Vec<Pair>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(pair).collect()).collect()
}

impl ProblemFile {
    /// Parses JSON; syntax and schema errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m);
            GurError::Problem(format!("line {}, column {}: {msg}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn build(&self) -> Result<Problem> {
        self.build_with(&Tolerances::default())
    }

    pub fn build_with(&self, tol: &Tolerances) -> Result<Problem> {
        if self.dim == 0 {
            return Err(field_err("dim", "must be at least 1"));
        }
        let mut observables = BTreeMap::new();
        for (name, m) in &self.observables {
            let field = format!("observables.{name}");
            let obs = Observable::with_tolerances(matrix(&field, self.dim, m)?, tol).map_err(|e| field_err(&field, e))?;
            observables.insert(name.clone(), obs);
        }
        let state = match &self.state {
            StateSpec::Pure { data } => {
                if data.len() != self.dim {
                    return Err(field_err("state.data", format!("expected {} amplitudes, found {}", self.dim, data.len())));
                }
                let v: Vec<Complex64> = data.iter().copied().map(c).collect();
                State::pure_with_tolerances(&v, tol).map_err(|e| field_err("state", e))?
            }
            StateSpec::Density { data } => {
                State::density_with_tolerances(matrix("state.data", self.dim, data)?, tol).map_err(|e| field_err("state", e))?
            }
        };
        let params = self.params.iter().map(|(k, v)| (k.clone(), c(*v))).collect();
        Ok(Problem { state, observables, params })
    }

    /// Problem file describing `state` with observables `X`, `Y` and
    /// parameters `s`, `t`.
    pub fn from_parts(state: &State, x: &Observable, y: &Observable, s: Complex64, t: Complex64) -> Self {
        let state_spec = match state.amplitudes() {
            Some(a) => StateSpec::Pure { data: a.iter().copied().map(pair).collect() },
            None => StateSpec::Density { data: rows(&state.density_matrix()) },
        };
        let observables = BTreeMap::from([("X".to_string(), rows(x.matrix())), ("Y".to_string(), rows(y.matrix()))]);
        let params = BTreeMap::from([("s".to_string(), pair(s)), ("t".to_string(), pair(t))]);
        Self { dim: state.dim(), observables, state: state_spec, params }
    }

    pub fn from_instance(inst: &Instance) -> Self {
        Self::from_parts(&inst.state, &inst.x, &inst.y, inst.s, inst.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{instance, rng};

    const PAULI: &str = r#"{
        "dim": 2,
        "observables": {
            "X": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
            "Y": [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]
        },
        "state": { "kind": "pure", "data": [[1, 0], [0, 0]] },
        "params": { "s": [1, 0], "t": [0.5, 0.25] }
    }"#;

    #[test]
    fn parses_example() {
        let p = ProblemFile::parse(PAULI).unwrap().build().unwrap();
        assert_eq!(p.observable("X").unwrap().eigenvalues(), &[-1.0, 1.0]);
        assert_eq!(p.param("t"), Some(Complex64::new(0.5, 0.25)));
        assert!(p.state.is_pure());
        assert!(p.observable("Z").is_err());
    }

    #[test]
    fn rejects_unknown_fields_with_position() {
        let bad = PAULI.replace("\"params\"", "\"extra\": 1, \"params\"");
        let e = ProblemFile::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("line") && e.contains("extra"), "{e}");
        let e = ProblemFile::parse("{\"dim\": 2,").unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
    }

    #[test]
    fn rejects_invalid_content() {
        let not_herm = PAULI.replace("[[0, 1], [0, 0]]]", "[[0, 2], [0, 0]]]");
        let e = ProblemFile::parse(&not_herm).unwrap().build().unwrap_err().to_string();
        assert!(e.contains("observables.Y"), "{e}");
        let unnorm = PAULI.replace("[[1, 0], [0, 0]] }", "[[1, 0], [1, 0]] }");
        let e = ProblemFile::parse(&unnorm).unwrap().build().unwrap_err().to_string();
        assert!(e.contains("state"), "{e}");
        let short = PAULI.replace("[[1, 0], [0, 0]] }", "[[1, 0]] }");
        assert!(ProblemFile::parse(&short).unwrap().build().is_err());
    }

    #[test]
    fn tolerances_apply() {
        let off = PAULI.replace("[[1, 0], [0, 0]] }", "[[1.000001, 0], [0, 0]] }");
        assert!(ProblemFile::parse(&off).unwrap().build().is_err());
        let loose = Tolerances { normalization: 1e-5, ..Default::default() };
        assert!(ProblemFile::parse(&off).unwrap().build_with(&loose).is_ok());
    }

    #[test]
    fn density_round_trip() {
        let rho = crate::scenarios::werner(0.4).unwrap().rho;
        let (a, b, _) = crate::scenarios::collective_observables();
        let f = ProblemFile::from_parts(&rho, &a, &b, Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.2));
        let p = ProblemFile::parse(&f.to_json()).unwrap().build().unwrap();
        assert_eq!(p.state.density_matrix(), rho.density_matrix());
    }

    #[test]
    fn instance_round_trip_is_exact() {
        for k in 0..20 {
            let inst = instance(&mut rng(11, k), &[2, 3, 4]);
            let text = ProblemFile::from_instance(&inst).to_json();
            let p = ProblemFile::parse(&text).unwrap().build().unwrap();
            assert_eq!(p.observable("X").unwrap().matrix(), inst.x.matrix());
            assert_eq!(p.observable("Y").unwrap().matrix(), inst.y.matrix());
            assert_eq!(p.state.amplitudes(), inst.state.amplitudes());
            assert_eq!(p.param("s"), Some(inst.s));
        }
    }
}
