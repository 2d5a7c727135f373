//! Numerical laboratory for cumulant-based generalized uncertainty relations.
//!
//! The crate evaluates, for finite-dimensional observables `X`, `Y` and a
//! state `psi`, the inequality
//!
//! ```text
//! K[(s+s*)X] + K[(t+t*)Y] >= K(Z_st) + K*(Z_st),   Z_st = log(e^{sX} e^{tY})
//! ```
//!
//! where `K(Z) = log <e^Z>` is the cumulant generating function, together
//! with its order-by-order truncations (variance and skewness relations),
//! the exponential classical/quantum forms, and the concrete two-level,
//! spin-1 and two-qubit systems used to illustrate them.

pub mod bch;
pub mod cumulant;
pub mod error;
pub mod format;
pub mod gur;
pub mod oracle;
pub mod problem;
pub mod qmat;
pub mod random;
pub mod scan;
pub mod scenarios;
pub mod selftest;
pub mod tolerances;

pub use error::{GurError, Result};
pub use gur::{GurReport, Inequality};
pub use num_complex::Complex64;
pub use qmat::{CMatrix, Observable, State};
pub use tolerances::Tolerances;
