//! Dense complex linear algebra for small observables and states.

mod functions;
mod matrix;
mod observable;
mod state;

pub use functions::{eigendecompose, mat_exp, mat_log_principal, mat_log_principal_with, Eigendecomposition};
pub use matrix::{tensor, CMatrix};
pub use observable::Observable;
pub use state::{expectation, State};
