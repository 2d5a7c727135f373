//! Matrix exponential and principal logarithm.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::CMatrix;
use super::observable::Observable;
use crate::error::{GurError, Result};
use crate::tolerances::Tolerances;

/// Relative size of the last Taylor term kept by the scaling-and-squaring path.
const SERIES_TOL: f64 = 1e-16;

/// `exp(M)`.
///
/// Hermitian input goes through the spectral decomposition; anything else
/// uses scaling and squaring of a truncated Taylor series. The zero matrix
/// maps to the identity exactly.
pub fn mat_exp(m: &CMatrix) -> CMatrix {
    if m.is_zero() {
        return CMatrix::identity(m.dim());
    }
    if m.hermiticity_deviation() == 0.0 {
        if let Ok(obs) = Observable::new(m.clone()) {
            return obs.exp_scaled(Complex64::new(1.0, 0.0));
        }
    }
    exp_scaling_squaring(m)
}

fn exp_scaling_squaring(m: &CMatrix) -> CMatrix {
    let norm = m.norm_1();
    // scale so that ||A / 2^k||_1 <= 1/2
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = m.as_dmatrix() * Complex64::new(0.5f64.powi(squarings), 0.0);
    let n = m.dim();
    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..64 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
        let tnorm: f64 = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let snorm: f64 = sum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if tnorm <= SERIES_TOL * snorm {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    CMatrix::wrap(sum)
}

/// Eigendecomposition `M = V diag(lambda) V^-1` of a general complex matrix.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub eigenvalues: Vec<Complex64>,
    /// Columns normalized to unit 2-norm.
    pub eigenvectors: DMatrix<Complex64>,
    /// 2-norm condition number of the eigenvector matrix.
    pub condition: f64,
}

/// Diagonalizes a general complex matrix via the complex Schur form and
/// back substitution for the eigenvectors of the triangular factor.
pub fn eigendecompose(m: &CMatrix, tol: &Tolerances) -> Result<Eigendecomposition> {
    let n = m.dim();
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let schur = Schur::try_new(m.as_dmatrix().clone(), f64::EPSILON, 10_000)
        .ok_or(GurError::NotDiagonalizable { cond: f64::INFINITY })?;
    let (q, t) = schur.unpack();
    for i in 0..n {
        for j in 0..i {
            // the complex Schur form must be triangular
            if t[(i, j)].norm() > 1e-12 * scale {
                return Err(GurError::NotDiagonalizable { cond: f64::INFINITY });
            }
        }
    }
    let tnorm = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let gap_floor = 1e-14 * tnorm.max(f64::MIN_POSITIVE);
    let mut x = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        x[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut rhs = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                rhs -= t[(i, j)] * x[(j, k)];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < gap_floor {
                if rhs.norm() <= 1e-12 * tnorm {
                    // repeated eigenvalue inside a diagonal block
                    x[(i, k)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                denom = Complex64::new(gap_floor, 0.0);
            }
            x[(i, k)] = rhs / denom;
        }
    }
    let mut v = q * x;
    for mut col in v.column_iter_mut() {
        let nrm = col.norm();
        col /= Complex64::new(nrm, 0.0);
    }
    let sv = v.clone().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition.is_nan() || condition > tol.max_condition {
        return Err(GurError::NotDiagonalizable { cond: condition });
    }
    Ok(Eigendecomposition {
        eigenvalues: (0..n).map(|i| t[(i, i)]).collect(),
        eigenvectors: v,
        condition,
    })
}

/// Principal matrix logarithm of a diagonalizable matrix with no eigenvalue
/// on the closed negative real axis.
pub fn mat_log_principal(m: &CMatrix) -> Result<CMatrix> {
    mat_log_principal_with(m, &Tolerances::default())
}

pub fn mat_log_principal_with(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let n = m.dim();
    if *m == CMatrix::identity(n) {
        return Ok(CMatrix::zeros(n));
    }
    let eig = eigendecompose(m, tol)?;
    let mut logs = Vec::with_capacity(n);
    for &lambda in &eig.eigenvalues {
        if lambda.norm() < tol.singular_eigenvalue
            || (lambda.arg().abs() - std::f64::consts::PI).abs() < tol.branch_cut
        {
            return Err(GurError::EigenvalueOnBranchCut {
                re: lambda.re,
                im: lambda.im,
            });
        }
        logs.push(lambda.ln());
    }
    let v = &eig.eigenvectors;
    let v_inv = v
        .clone()
        .lu()
        .try_inverse()
        .ok_or(GurError::NotDiagonalizable { cond: f64::INFINITY })?;
    let mut vd = v.clone();
    for (j, mut col) in vd.column_iter_mut().enumerate() {
        col *= logs[j];
    }
    CMatrix::from_dmatrix(vd * v_inv)
}
