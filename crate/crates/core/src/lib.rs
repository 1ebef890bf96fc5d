//! Exact computation of the sp(2n) action on trivectors and of the number of
//! functionally independent first-order invariants of maximal-rank 2-forms.

pub mod action;
pub mod combinatorics;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod rng;
pub mod symplectic;
pub mod trivector;

pub use error::{Error, Result};
