//! Packed linear algebra over GF(2).
//!
//! Everything here is a pure function of its inputs. Matrices are stored
//! row-major as packed [`BitVector`] rows so that row operations are word XORs.
//! Permutations are index maps; products with a permutation matrix are
//! coordinate moves.

mod bitvec;
mod matrix;
mod permutation;

pub use bitvec::BitVector;
pub use matrix::{kronecker_power, kronecker_power_cached, BitMatrix, MAX_KRONECKER_EXPONENT};
pub use permutation::Permutation;

pub(crate) use matrix::check_index_list;
