use thiserror::Error;

pub type Result<T, E = GurError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GurError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix must have dimension >= 1 and exactly dim^2 entries (dim {dim}, {len} entries)")]
    Shape { dim: usize, len: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("eigenvalue {re:.6e}{im:+.6e}i lies on or near the branch cut of the principal logarithm")]
    EigenvalueOnBranchCut { re: f64, im: f64 },

    #[error("matrix is not diagonalizable (eigenvector condition number {cond:.3e})")]
    NotDiagonalizable { cond: f64 },

    #[error("expectation value of the exponential vanishes (|<e^Z>| = {0:.3e})")]
    ZeroExpectation(f64),

    #[error("observable has zero spectral norm")]
    ZeroObservable,

    #[error("observables do not commute (||[X,Y]|| = {norm:.3e})")]
    NonCommuting { norm: f64 },

    #[error("variance of {which} vanishes")]
    DegenerateVariance { which: &'static str },

    #[error("order {order} outside supported range 0..={max}")]
    InvalidOrder { order: usize, max: usize },

    #[error("Werner parameter eta = {0} outside [-1/3, 1]")]
    EtaOutOfRange(f64),

    #[error("unknown inequality `{0}`")]
    UnknownInequality(String),

    #[error("binding error: {0}")]
    Binding(String),

    #[error("g(lo) - target and g(hi) - target have the same sign ({g_lo:.6e}, {g_hi:.6e})")]
    NoSignChange { g_lo: f64, g_hi: f64 },

    #[error("problem file: {0}")]
    Problem(String),
}
