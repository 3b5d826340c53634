use std::fmt;

use crate::error::{param, Result};

const WORD_BITS: usize = 64;

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A packed vector over GF(2).
///
/// Bit `i` lives in word `i / 64` at position `i % 64`, which is the same as
/// LSB-first packing within bytes when the words are laid out little-endian.
/// Bits past `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector from 0/1 values; any nonzero entry counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        Self { len, words }
    }

    /// Unpacks `len` bits from LSB-first bytes. Extra bits in the final byte
    /// must be zero and the byte count must be exactly `ceil(len / 8)`.
    pub fn from_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        let need = len.div_ceil(8);
        if bytes.len() != need {
            return param(format!(
                "expected {need} bytes for {len} bits, got {}",
                bytes.len()
            ));
        }
        if !len.is_multiple_of(8) {
            let mask = !((1u8 << (len % 8)) - 1);
            if bytes[need - 1] & mask != 0 {
                return param("nonzero padding bits in final byte");
            }
        }
        let mut words = vec![0u64; words_for(len)];
        for (i, &byte) in bytes.iter().enumerate() {
            words[i / 8] |= (byte as u64) << (8 * (i % 8));
        }
        Ok(Self { len, words })
    }

    /// Packs to `ceil(len / 8)` bytes, LSB-first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let need = self.len.div_ceil(8);
        self.words
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(need)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Returns bit `i`. Panics when `i >= len`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Checked variant of [`BitVector::get`].
    pub fn try_get(&self, i: usize) -> Result<bool> {
        if i >= self.len {
            return param(format!(
                "bit index {i} out of range for length {}",
                self.len
            ));
        }
        Ok(self.get(i))
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place XOR. Lengths must match.
    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return param(format!("xor of lengths {} and {}", self.len, other.len));
        }
        self.xor_words(other);
        Ok(())
    }

    #[inline]
    pub(crate) fn xor_words(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    /// Hamming distance.
    pub fn distance(&self, other: &BitVector) -> Result<usize> {
        if self.len != other.len {
            return param(format!(
                "distance of lengths {} and {}",
                self.len, other.len
            ));
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Picks the bits at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<BitVector> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.len) {
            return param(format!("index {bad} out of range for length {}", self.len));
        }
        Ok(BitVector::from_bools(indices.iter().map(|&i| self.get(i))))
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        BitVector::from_bools(self.iter().chain(other.iter()))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[")?;
        for b in self.iter() {
            write!(f, "{}", u8::from(b))?;
        }
        write!(f, "]")
    }
}
