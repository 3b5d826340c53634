use super::{BitMatrix, BitVector};
use crate::error::{param, Result};

/// Coordinate permutation stored as an index map.
///
/// `forward[j]` is the destination column of source coordinate `j`, so the
/// product `v·P` places `v[j]` at position `forward[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    forward: Vec<usize>,
}

impl Permutation {
    pub fn identity(size: usize) -> Self {
        Self {
            forward: (0..size).collect(),
        }
    }

    /// Validates that `forward` is a bijection on `0..forward.len()`.
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut seen = vec![false; n];
        for &d in &forward {
            if d >= n || seen[d] {
                return param("index map is not a bijection");
            }
            seen[d] = true;
        }
        Ok(Self { forward })
    }

    /// `P = [P1 | P2]`: column `i < k` of `P` carries its one at row
    /// `info_set[i]`, column `k + i` at row `frozen_set[i]`. Equivalently
    /// `v·P = (v restricted to info_set, v restricted to frozen_set)`.
    ///
    /// Both sets must be strictly ascending and together partition `0..n`.
    pub fn from_partition(info_set: &[usize], frozen_set: &[usize]) -> Result<Self> {
        let n = info_set.len() + frozen_set.len();
        let mut forward = vec![usize::MAX; n];
        for (col, &row) in info_set.iter().chain(frozen_set).enumerate() {
            if row >= n {
                return param(format!("index {row} out of range for n = {n}"));
            }
            if forward[row] != usize::MAX {
                return param(format!("index {row} appears twice in the partition"));
            }
            forward[row] = col;
        }
        for set in [info_set, frozen_set] {
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return param("partition sets must be strictly ascending");
            }
        }
        Ok(Self { forward })
    }

    pub fn size(&self) -> usize {
        self.forward.len()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.forward.len()];
        for (src, &dst) in self.forward.iter().enumerate() {
            inv[dst] = src;
        }
        Permutation { forward: inv }
    }

    /// `v·P`, or `v·P⁻¹` when `inverse` is set.
    pub fn apply(&self, v: &BitVector, inverse: bool) -> Result<BitVector> {
        if v.len() != self.size() {
            return param(format!(
                "vector of length {} under permutation of size {}",
                v.len(),
                self.size()
            ));
        }
        let mut out = BitVector::zeros(v.len());
        if inverse {
            for (dst, &src) in self.forward.iter().enumerate() {
                if v.get(src) {
                    out.set(dst, true);
                }
            }
        } else {
            for src in v.ones() {
                out.set(self.forward[src], true);
            }
        }
        Ok(out)
    }

    /// Dense permutation matrix, for checks only.
    pub fn to_matrix(&self) -> BitMatrix {
        let n = self.size();
        let mut m = BitMatrix::zeros(n, n);
        for (row, &col) in self.forward.iter().enumerate() {
            m.set(row, col, true);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_example_n4() {
        // 1-based A = {2,4}, A^c = {1,3}
        let p = Permutation::from_partition(&[1, 3], &[0, 2]).unwrap();
        // v = (a,b,c,d) -> (b,d,a,c)
        let v = BitVector::from_bits(&[1, 0, 0, 0]);
        assert_eq!(p.apply(&v, false).unwrap().to_bits(), vec![0, 0, 1, 0]);
        let v = BitVector::from_bits(&[0, 1, 0, 0]);
        assert_eq!(p.apply(&v, false).unwrap().to_bits(), vec![1, 0, 0, 0]);
        let c = BitVector::from_bits(&[1, 0, 1, 0]);
        assert_eq!(p.apply(&c, true).unwrap().to_bits(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn ordered_info_set_gives_identity() {
        let p = Permutation::from_partition(&[0, 1, 2], &[3, 4]).unwrap();
        assert_eq!(p, Permutation::identity(5));
        assert_eq!(p.to_matrix(), BitMatrix::identity(5));
    }

    #[test]
    fn partition_errors() {
        assert!(Permutation::from_partition(&[0, 1], &[1, 2]).is_err());
        assert!(Permutation::from_partition(&[0, 5], &[1, 2]).is_err());
        assert!(Permutation::from_partition(&[1, 0], &[2, 3]).is_err());
        assert!(Permutation::from_forward(vec![0, 0]).is_err());
    }

    #[test]
    fn dense_matrix_agrees_with_index_map() {
        let p = Permutation::from_partition(&[1, 4, 6], &[0, 2, 3, 5, 7]).unwrap();
        let m = p.to_matrix();
        for r in 0..8 {
            assert_eq!(m.row(r).weight(), 1);
            assert_eq!(m.transpose().row(r).weight(), 1);
        }
        for x in 0u32..256 {
            let v = BitVector::from_bools((0..8).map(|i| x >> i & 1 == 1));
            assert_eq!(p.apply(&v, false).unwrap(), m.vec_mul(&v).unwrap());
            assert_eq!(
                p.apply(&v, true).unwrap(),
                p.inverse().apply(&v, false).unwrap()
            );
        }
    }

    #[test]
    fn weight_preserved_exhaustive_n8() {
        let p = Permutation::from_partition(&[2, 3, 7], &[0, 1, 4, 5, 6]).unwrap();
        for x in 0u32..256 {
            let v = BitVector::from_bools((0..8).map(|i| x >> i & 1 == 1));
            for inv in [false, true] {
                assert_eq!(p.apply(&v, inv).unwrap().weight(), v.weight());
            }
        }
    }

    #[test]
    fn size_mismatch() {
        assert!(Permutation::identity(4)
            .apply(&BitVector::zeros(5), false)
            .is_err());
    }
}
