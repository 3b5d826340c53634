use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

/// Exact operation counts for one measured phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    /// Single-bit XORs over GF(2).
    pub xor_bits: u64,
    /// Min-sum f and g evaluations.
    pub fg_evals: u64,
    /// Coordinate moves performed by permutations.
    pub perm_moves: u64,
}

impl OpCounters {
    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: Self) {
        self.xor_bits += rhs.xor_bits;
        self.fg_evals += rhs.fg_evals;
        self.perm_moves += rhs.perm_moves;
    }
}
