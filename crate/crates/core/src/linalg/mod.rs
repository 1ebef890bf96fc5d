//! Exact rational and modular linear algebra.

pub mod bareiss;
pub mod export;
pub mod matrix;
pub mod modular;
pub mod rational;

pub use bareiss::{bareiss_rank, kernel_basis, Echelon};
pub use export::{export_matrix, MatrixFormat};
pub use matrix::{ExactMatrix, MatQ, SparseMatQ};
pub use modular::{modular_rank, DEFAULT_PRIME};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
