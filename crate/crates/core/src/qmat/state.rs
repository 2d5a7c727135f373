use nalgebra::linalg::SymmetricEigen;
use nalgebra::DVector;
use num_complex::Complex64;

use super::matrix::{tensor, CMatrix};
use crate::error::{GurError, Result};
use crate::tolerances::Tolerances;

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Pure(DVector<Complex64>),
    Density(CMatrix),
}

/// A quantum state: a normalized vector or a density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct State(Repr);

impl State {
    /// Pure state from an already normalized vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        Self::pure_with_tolerances(amplitudes, &Tolerances::default())
    }

    pub fn pure_with_tolerances(amplitudes: &[Complex64], tol: &Tolerances) -> Result<Self> {
        let v = Self::finite_vector(amplitudes)?;
        let norm = v.norm();
        if (norm - 1.0).abs() > tol.normalization {
            return Err(GurError::InvalidState(format!(
                "pure state norm is {norm:.15}, expected 1"
            )));
        }
        Ok(Self(Repr::Pure(v)))
    }

    /// Pure state proportional to `amplitudes`.
    pub fn pure_normalized(amplitudes: &[Complex64]) -> Result<Self> {
        let v = Self::finite_vector(amplitudes)?;
        let norm = v.norm();
        if norm == 0.0 {
            return Err(GurError::InvalidState("zero vector".into()));
        }
        Ok(Self(Repr::Pure(v / Complex64::new(norm, 0.0))))
    }

    pub fn density(rho: CMatrix) -> Result<Self> {
        Self::density_with_tolerances(rho, &Tolerances::default())
    }

    pub fn density_with_tolerances(rho: CMatrix, tol: &Tolerances) -> Result<Self> {
        let deviation = rho.hermiticity_deviation();
        if deviation > tol.hermiticity * rho.max_abs().max(1.0) {
            return Err(GurError::NotHermitian { deviation });
        }
        let tr = rho.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol.normalization {
            return Err(GurError::InvalidState(format!(
                "density trace is {:.15}{:+.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        let m = rho.as_dmatrix();
        let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eig = SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tol.psd {
            return Err(GurError::InvalidState(format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self(Repr::Density(rho)))
    }

    /// Convex combination `sum_k p_k rho_k`. Weights must be nonnegative and
    /// sum to one.
    pub fn mixture(components: &[(f64, State)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| GurError::InvalidState("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut rho = CMatrix::zeros(dim);
        for (p, s) in components {
            if *p < 0.0 {
                return Err(GurError::InvalidState(format!("negative weight {p}")));
            }
            if s.dim() != dim {
                return Err(GurError::Dimension {
                    expected: dim,
                    found: s.dim(),
                });
            }
            rho = &rho + &s.density_matrix().scale_re(*p);
        }
        Self::density(rho)
    }

    /// `|a> (x) |b>`, pure if both factors are pure.
    pub fn product(a: &State, b: &State) -> State {
        match (&a.0, &b.0) {
            (Repr::Pure(u), Repr::Pure(v)) => {
                let w = DVector::from_fn(u.len() * v.len(), |i, _| u[i / v.len()] * v[i % v.len()]);
                State(Repr::Pure(w))
            }
            _ => State(Repr::Density(tensor(&a.density_matrix(), &b.density_matrix()))),
        }
    }

    fn finite_vector(amplitudes: &[Complex64]) -> Result<DVector<Complex64>> {
        if amplitudes.is_empty() {
            return Err(GurError::InvalidState("empty amplitude vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GurError::NonFinite);
        }
        Ok(DVector::from_column_slice(amplitudes))
    }

    pub fn dim(&self) -> usize {
        match &self.0 {
            Repr::Pure(v) => v.len(),
            Repr::Density(rho) => rho.dim(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.0, Repr::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match &self.0 {
            Repr::Pure(v) => Some(v.as_slice()),
            Repr::Density(_) => None,
        }
    }

    pub fn density_matrix(&self) -> CMatrix {
        match &self.0 {
            Repr::Pure(v) => CMatrix::outer(v.as_slice()),
            Repr::Density(rho) => rho.clone(),
        }
    }

    /// `<psi|M|psi>` for pure states, `Tr(rho M)` for density matrices.
    pub fn expect(&self, m: &CMatrix) -> Result<Complex64> {
        if m.dim() != self.dim() {
            return Err(GurError::Dimension {
                expected: self.dim(),
                found: m.dim(),
            });
        }
        let a = m.as_dmatrix();
        Ok(match &self.0 {
            Repr::Pure(v) => v.dotc(&(a * v)),
            Repr::Density(rho) => {
                let r = rho.as_dmatrix();
                let n = r.nrows();
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        acc += r[(i, j)] * a[(j, i)];
                    }
                }
                acc
            }
        })
    }

    /// Applies `M` to a pure state, returning the (unnormalized) vector.
    pub fn apply(&self, m: &CMatrix) -> Option<Vec<Complex64>> {
        match &self.0 {
            Repr::Pure(v) => Some((m.as_dmatrix() * v).as_slice().to_vec()),
            Repr::Density(_) => None,
        }
    }
}

/// Expectation value of `m` in `state`.
pub fn expectation(state: &State, m: &CMatrix) -> Result<Complex64> {
    state.expect(m)
}
