//! Exact arithmetic in GF(p) and rank/kernel computation for condition
//! matrices.

mod field;
mod matrix;

pub use field::{PrimeField, DEFAULT_PRIME, MAX_PRIME, SECONDARY_PRIME};
pub use matrix::{nullspace_basis, rank, Matrix};
