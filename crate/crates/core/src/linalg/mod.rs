//! Dense complex linear algebra and information-theoretic functionals.

mod eigen;
mod matrix;
mod ops;
mod state;

pub use eigen::{eigh, eigh_with_tol, eigvalsh, Eigh, HERMITIAN_TOL};
pub use matrix::Matrix;
pub use ops::{
    entropy_of, kron, matrix_log2_on_support, partial_trace, partial_trace_op, partial_transpose, partial_transpose_op,
    trace_norm, von_neumann_entropy, Subsystem, LOG_CUTOFF,
};
pub use state::{Density, Ket, STATE_TOL};
