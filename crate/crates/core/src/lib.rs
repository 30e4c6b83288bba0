//! Exact computation of square-zero bases for classical matrix Lie algebras,
//! induced representations, and generic-rank bounds on the number of
//! algebraically independent invariant functions.

pub mod error;
pub mod exactmath;

pub use error::{Error, Result};
pub mod liealg;
pub mod reptheory;
pub mod invbound;
pub mod invariants;
