use std::fmt;
use std::sync::{Arc, OnceLock};

use super::BitVector;
use crate::error::{param, Error, Result};

/// Largest supported Kronecker exponent (n = 2^16).
pub const MAX_KRONECKER_EXPONENT: u32 = 16;

/// Row-major binary matrix; every row is a packed [`BitVector`] of length `cols`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self {
            rows: size,
            cols: size,
            data: (0..size).map(|i| BitVector::unit(size, i)).collect(),
        }
    }

    /// Builds a matrix from row vectors, which must all share one length.
    /// `cols` is needed to describe a matrix with zero rows.
    pub fn from_row_vectors(cols: usize, data: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = data.iter().find(|r| r.len() != cols) {
            return param(format!(
                "row of length {} in matrix with {cols} columns",
                bad.len()
            ));
        }
        Ok(Self {
            rows: data.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from nested 0/1 rows. Panics on ragged input; meant for
    /// literals in tests and examples.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.as_ref().len(), cols, "ragged matrix literal");
                BitVector::from_bits(r.as_ref())
            })
            .collect();
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.data.iter().map(BitVector::to_bits).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Diagonal all ones and nothing above it.
    pub fn is_unit_lower_triangular(&self) -> bool {
        self.is_square()
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, row)| row.get(i) && row.ones().all(|j| j <= i))
    }

    /// `self · other` over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return param(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let data = self
            .data
            .iter()
            .map(|row| other.combine_rows(row).0)
            .collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Row vector times matrix, `v · self`.
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector> {
        Ok(self.vec_mul_counted(v)?.0)
    }

    /// Like [`BitMatrix::vec_mul`], also returning the number of bit-XORs
    /// performed (one full row per set bit of `v`).
    pub fn vec_mul_counted(&self, v: &BitVector) -> Result<(BitVector, u64)> {
        if v.len() != self.rows {
            return param(format!(
                "vector of length {} times {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            ));
        }
        Ok(self.combine_rows(v))
    }

    fn combine_rows(&self, selector: &BitVector) -> (BitVector, u64) {
        let mut acc = BitVector::zeros(self.cols);
        let mut xors = 0u64;
        for i in selector.ones() {
            acc.xor_words(&self.data[i]);
            xors += self.cols as u64;
        }
        (acc, xors)
    }

    /// Picks `result[a][b] = self[row_idx[a]][col_idx[b]]`. Both index lists
    /// must be strictly ascending and in range.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<BitMatrix> {
        check_index_list(row_idx, self.rows, "row")?;
        check_index_list(col_idx, self.cols, "column")?;
        let data = row_idx
            .iter()
            .map(|&r| self.data[r].select(col_idx))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix {
            rows: row_idx.len(),
            cols: col_idx.len(),
            data,
        })
    }

    /// Inverse of a unit lower-triangular matrix by forward substitution:
    /// `X_i = e_i ⊕ Σ_{j<i, S[i][j]=1} X_j`.
    pub fn invert_unit_lower_triangular(&self) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::Structure(format!(
                "cannot invert non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if !self.is_unit_lower_triangular() {
            return Err(Error::Structure(
                "matrix is not unit lower triangular".into(),
            ));
        }
        let size = self.rows;
        let mut inv: Vec<BitVector> = Vec::with_capacity(size);
        for (i, row) in self.data.iter().enumerate() {
            let mut x = BitVector::unit(size, i);
            for j in row.ones().take_while(|&j| j < i) {
                x.xor_words(&inv[j]);
            }
            inv.push(x);
        }
        Ok(BitMatrix {
            rows: size,
            cols: size,
            data: inv,
        })
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                out.data[c].set(r, true);
            }
        }
        out
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            write!(f, "  ")?;
            for b in row.iter() {
                write!(f, "{}", u8::from(b))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn check_index_list(idx: &[usize], bound: usize, what: &str) -> Result<()> {
    for (pos, &i) in idx.iter().enumerate() {
        if i >= bound {
            return param(format!("{what} index {i} out of range (< {bound})"));
        }
        if pos > 0 && idx[pos - 1] >= i {
            return param(format!("{what} indices must be strictly ascending"));
        }
    }
    Ok(())
}

/// `G_n = F^{⊗m}` with `F = [1 0; 1 1]`, built by the block doubling
/// `G_{2n} = [G_n 0; G_n G_n]`.
pub fn kronecker_power(m: u32) -> Result<BitMatrix> {
    if m == 0 || m > MAX_KRONECKER_EXPONENT {
        return param(format!(
            "kronecker exponent must be in 1..={MAX_KRONECKER_EXPONENT}, got {m}"
        ));
    }
    let mut rows = vec![BitVector::from_bits(&[1])];
    for _ in 0..m {
        let half = rows.len();
        let size = 2 * half;
        let mut next = Vec::with_capacity(size);
        for row in &rows {
            let mut top = BitVector::zeros(size);
            for j in row.ones() {
                top.set(j, true);
            }
            next.push(top);
        }
        for row in &rows {
            let mut bottom = BitVector::zeros(size);
            for j in row.ones() {
                bottom.set(j, true);
                bottom.set(j + half, true);
            }
            next.push(bottom);
        }
        rows = next;
    }
    let n = rows.len();
    Ok(BitMatrix {
        rows: n,
        cols: n,
        data: rows,
    })
}

/// Process-wide cache of [`kronecker_power`] results, one slot per exponent.
pub fn kronecker_power_cached(m: u32) -> Result<Arc<BitMatrix>> {
    static CACHE: [OnceLock<Arc<BitMatrix>>; MAX_KRONECKER_EXPONENT as usize + 1] =
        [const { OnceLock::new() }; MAX_KRONECKER_EXPONENT as usize + 1];
    if m == 0 || m > MAX_KRONECKER_EXPONENT {
        return kronecker_power(m).map(Arc::new);
    }
    let slot = &CACHE[m as usize];
    if let Some(g) = slot.get() {
        return Ok(Arc::clone(g));
    }
    let g = Arc::new(kronecker_power(m)?);
    Ok(Arc::clone(slot.get_or_init(|| g)))
}
