use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{GurError, Result};
use crate::tolerances::Tolerances;

/// Hermitian matrix together with its spectral decomposition.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: CMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
    sigma_max: f64,
}

impl Observable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let deviation = matrix.hermiticity_deviation();
        if deviation > tol.hermiticity * matrix.max_abs() {
            return Err(GurError::NotHermitian { deviation });
        }
        let m = matrix.as_dmatrix();
        let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = DMatrix::from_fn(m.nrows(), m.nrows(), |r, c| eig.eigenvectors[(r, order[c])]);
        let sigma_max = eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
        Ok(Self {
            matrix,
            eigenvalues,
            eigenvectors,
            sigma_max,
        })
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary whose columns are the eigenvectors, in eigenvalue order.
    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// Largest singular value, `max |lambda|`.
    pub fn sigma_max(&self) -> f64 {
        self.sigma_max
    }

    /// `f(X) = V diag(f(lambda)) V^dagger`
    pub fn apply_spectral(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let v = &self.eigenvectors;
        let d = DVector::from_iterator(self.eigenvalues.len(), self.eigenvalues.iter().map(|&l| f(l)));
        let mut scaled = v.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= d[j];
        }
        CMatrix::wrap(scaled * v.adjoint())
    }

    /// `exp(s X)` for complex `s`, through the spectral decomposition.
    pub fn exp_scaled(&self, s: Complex64) -> CMatrix {
        if s == Complex64::new(0.0, 0.0) {
            return CMatrix::identity(self.dim());
        }
        self.apply_spectral(|l| (s * l).exp())
    }

    /// `a X + b Y` for real coefficients, revalidated as Hermitian.
    pub fn linear_combination(&self, a: f64, other: &Observable, b: f64) -> Result<Observable> {
        self.matrix.check_same_dim(&other.matrix)?;
        Observable::new(&self.matrix.scale_re(a) + &other.matrix.scale_re(b))
    }

    pub fn shifted(&self, c: f64) -> Observable {
        let m = &self.matrix + &CMatrix::identity(self.dim()).scale_re(c);
        Observable::new(m).expect("shift by a real multiple of identity preserves hermiticity")
    }

    pub fn scaled(&self, a: f64) -> Observable {
        Observable::new(self.matrix.scale_re(a)).expect("real scaling preserves hermiticity")
    }
}

impl TryFrom<CMatrix> for Observable {
    type Error = GurError;
    fn try_from(m: CMatrix) -> Result<Self> {
        Observable::new(m)
    }
}
