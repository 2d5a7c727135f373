//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// Central tolerance record. Every threshold used for validation or
/// classification lives here so a caller can override them in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Hermiticity check, relative to the largest entry magnitude.
    pub hermiticity: f64,
    /// Unit norm / unit trace of states.
    pub normalization: f64,
    /// Smallest admissible density-matrix eigenvalue is `-psd`.
    pub psd: f64,
    /// Inequality reports count as satisfied when `margin >= -report`.
    pub report: f64,
    /// Scan cells count as violations when `margin < -violation`.
    pub violation: f64,
    /// Distance of `arg(lambda)` from pi that is treated as on the branch cut.
    pub branch_cut: f64,
    /// Eigenvalue magnitude treated as zero by the matrix logarithm.
    pub singular_eigenvalue: f64,
    /// Largest admissible eigenvector condition number.
    pub max_condition: f64,
    /// Magnitude below which `<e^Z>` is treated as zero.
    pub zero_expectation: f64,
    /// Commutator norm below which two observables commute.
    pub commutation: f64,
    /// Standard deviation below which a variance is degenerate.
    pub degenerate_variance: f64,
    /// Spectral norm below which an observable is zero.
    pub zero_observable: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            normalization: 1e-12,
            psd: 1e-12,
            report: 1e-10,
            violation: 1e-9,
            branch_cut: 1e-8,
            singular_eigenvalue: 1e-12,
            max_condition: 1e12,
            zero_expectation: 1e-300,
            commutation: 1e-10,
            degenerate_variance: 1e-12,
            zero_observable: 1e-14,
        }
    }
}
