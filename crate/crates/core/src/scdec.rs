//! Min-sum successive-cancellation decoding.
//!
//! The decoder walks the code tree depth first. For `x = (v_a ⊕ v_b, v_b)`
//! with `v_a`, `v_b` the half-length encodings of the two halves of `u`, the
//! left child sees `f(L_lo, L_hi)` and the right child, once `v_a` is known,
//! sees `g(L_lo, L_hi, v_a)`. Leaves decide `u_i` in index order.
//!
//! LLRs are positive when 0 is the more likely bit. Magnitudes saturate at
//! [`LLR_SATURATION`]; an erased position is LLR 0.
//!
//! Because `F^{⊗m}` commutes with the bit-reversal permutation `B`,
//! `x = u·F^{⊗m}` also gives `x·B = (u·B)·F^{⊗m}`. Running the same tree on
//! the bit-reversed word decides `u` in bit-reversed index order
//! ([`DecodeOrder::BitReversed`]); that is the schedule whose bit-channel
//! Bhattacharyya parameters are the ones listed by
//! [`crate::polar::bhattacharyya_recursion`], so it is the default.

use crate::error::{param, Result};
use crate::gf2::BitVector;
use crate::polar::{complement, log2_length};

pub const LLR_SATURATION: f64 = 30.0;

#[inline]
fn saturate(v: f64) -> f64 {
    v.clamp(-LLR_SATURATION, LLR_SATURATION)
}

/// Check-node rule `sign(a)·sign(b)·min(|a|,|b|)`, with sign(0) = +.
#[inline]
pub fn minsum_f(a: f64, b: f64) -> f64 {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// Variable-node rule `b + (1 − 2u)·a`.
#[inline]
pub fn minsum_g(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}

/// Channel LLRs for one block.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    /// Rejects non-finite values and saturates the rest.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return param("LLR values must be finite");
        }
        Ok(Self(values.into_iter().map(saturate).collect()))
    }

    /// Binary-symmetric-channel LLRs at crossover `t/n`:
    /// `(1 − 2c_i)·ln((n − t)/t)`.
    pub fn from_hard(received: &BitVector, t: usize) -> Result<Self> {
        let n = received.len();
        if t == 0 || 2 * t >= n {
            return param(format!(
                "error weight must satisfy 0 < t < n/2, got t = {t}, n = {n}"
            ));
        }
        let l0 = saturate(((n - t) as f64 / t as f64).ln());
        Ok(Self(
            received.iter().map(|b| if b { -l0 } else { l0 }).collect(),
        ))
    }

    /// Known bits at full confidence, erased positions at zero.
    pub fn from_erasures(bits: &BitVector, erased: &[bool]) -> Result<Self> {
        if erased.len() != bits.len() {
            return param("erasure mask length differs from word length");
        }
        Ok(Self(
            bits.iter()
                .zip(erased)
                .map(|(b, &e)| match (e, b) {
                    (true, _) => 0.0,
                    (false, false) => LLR_SATURATION,
                    (false, true) => -LLR_SATURATION,
                })
                .collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Hard decisions, LLR < 0 ⇒ 1.
    pub fn hard_decision(&self) -> BitVector {
        BitVector::from_bools(self.0.iter().map(|&v| v < 0.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    /// Estimated encoder input û, length n.
    pub u_hat: BitVector,
    /// Re-encoding of û.
    pub x_hat: BitVector,
    /// Hamming distance between the hard-decided input and `x_hat`.
    pub residual_weight: usize,
    /// Number of f and g evaluations.
    pub fg_evals: u64,
}

impl DecodeResult {
    /// The entries of û at `positions`, in order.
    pub fn info_bits(&self, positions: &[usize]) -> Result<BitVector> {
        self.u_hat.select(positions)
    }
}

/// Order in which the decoder decides the entries of `u`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DecodeOrder {
    /// `u_1, u_2, …, u_n`.
    Natural,
    /// `u_{rev(1)}, …, u_{rev(n)}` with `rev` the m-bit index reversal.
    #[default]
    BitReversed,
}

/// m-bit reversal of every index in `0..n`.
pub fn bit_reversal_table(n: usize) -> Vec<usize> {
    let bits = n.trailing_zeros();
    (0..n)
        .map(|i| {
            if bits == 0 {
                0
            } else {
                i.reverse_bits() >> (usize::BITS - bits)
            }
        })
        .collect()
}

/// Decoder with reusable scratch buffers for one code length. A single
/// instance serves one decode at a time.
#[derive(Clone, Debug)]
pub struct ScDecoder {
    n: usize,
    order: DecodeOrder,
    /// Tree position of each code coordinate.
    slot: Vec<usize>,
    channel: Vec<f64>,
    scratch: Vec<f64>,
    u: Vec<u8>,
    x: Vec<u8>,
    frozen: Vec<Option<u8>>,
}

impl ScDecoder {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_order(n, DecodeOrder::default())
    }

    pub fn with_order(n: usize, order: DecodeOrder) -> Result<Self> {
        log2_length(n)?;
        let slot = match order {
            DecodeOrder::Natural => (0..n).collect(),
            DecodeOrder::BitReversed => bit_reversal_table(n),
        };
        Ok(Self {
            n,
            order,
            slot,
            channel: vec![0.0; n],
            scratch: vec![0.0; n],
            u: vec![0; n],
            x: vec![0; n],
            frozen: vec![None; n],
        })
    }

    pub fn order(&self) -> DecodeOrder {
        self.order
    }

    /// Decodes `llr` against the information set (strictly ascending,
    /// 0-based). `frozen_values` lists the pinned bits of the complement in
    /// ascending index order.
    pub fn decode(
        &mut self,
        llr: &LlrVector,
        info_set: &[usize],
        frozen_values: &BitVector,
    ) -> Result<DecodeResult> {
        let n = self.n;
        if llr.len() != n {
            return param(format!(
                "LLR vector of length {} for code length {n}",
                llr.len()
            ));
        }
        crate::gf2::check_index_list(info_set, n, "information set")?;
        let frozen_set = complement(info_set, n);
        if frozen_values.len() != frozen_set.len() {
            return param(format!(
                "{} frozen values supplied for {} frozen positions",
                frozen_values.len(),
                frozen_set.len()
            ));
        }
        self.frozen.fill(None);
        for (&pos, bit) in frozen_set.iter().zip(frozen_values.iter()) {
            self.frozen[self.slot[pos]] = Some(u8::from(bit));
        }
        for (&s, &v) in self.slot.iter().zip(llr.values()) {
            self.channel[s] = v;
        }

        let mut fg_evals = 0u64;
        let mut node = Node {
            frozen: &self.frozen,
            fg_evals: &mut fg_evals,
        };
        node.decode(
            &self.channel,
            0,
            &mut self.scratch,
            &mut self.u,
            &mut self.x,
        );

        let u_hat = BitVector::from_bools(self.slot.iter().map(|&s| self.u[s] == 1));
        let x_hat = BitVector::from_bools(self.slot.iter().map(|&s| self.x[s] == 1));
        let residual_weight = llr.hard_decision().distance(&x_hat)?;
        Ok(DecodeResult {
            u_hat,
            x_hat,
            residual_weight,
            fg_evals,
        })
    }
}

struct Node<'a> {
    frozen: &'a [Option<u8>],
    fg_evals: &'a mut u64,
}

impl Node<'_> {
    /// Decodes the subtree whose leaves are `u[base..base + llr.len()]`,
    /// writing leaf decisions to `u` and the subtree codeword to `x`.
    fn decode(
        &mut self,
        llr: &[f64],
        base: usize,
        scratch: &mut [f64],
        u: &mut [u8],
        x: &mut [u8],
    ) {
        let len = llr.len();
        if len == 1 {
            let bit = match self.frozen[base] {
                Some(v) => v,
                None => u8::from(llr[0] < 0.0),
            };
            u[0] = bit;
            x[0] = bit;
            return;
        }
        let half = len / 2;
        let (lo, hi) = llr.split_at(half);
        let (child, rest) = scratch.split_at_mut(half);
        let (u_left, u_right) = u.split_at_mut(half);
        let (x_left, x_right) = x.split_at_mut(half);

        for ((c, &a), &b) in child.iter_mut().zip(lo).zip(hi) {
            *c = minsum_f(a, b);
        }
        *self.fg_evals += half as u64;
        self.decode(child, base, rest, u_left, x_left);

        for (((c, &a), &b), &v) in child.iter_mut().zip(lo).zip(hi).zip(x_left.iter()) {
            *c = saturate(minsum_g(a, b, v));
        }
        *self.fg_evals += half as u64;
        self.decode(child, base + half, rest, u_right, x_right);

        for (a, &b) in x_left.iter_mut().zip(x_right.iter()) {
            *a ^= b;
        }
    }
}

/// One-shot decode with fresh scratch buffers and the default order.
pub fn sc_decode(
    llr: &LlrVector,
    info_set: &[usize],
    frozen_values: &BitVector,
) -> Result<DecodeResult> {
    ScDecoder::new(llr.len())?.decode(llr, info_set, frozen_values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::{polar_transform, ChannelSpec, PolarCode};

    #[test]
    fn f_and_g_examples() {
        assert_eq!(minsum_f(2.0, -3.0), -2.0);
        assert_eq!(minsum_f(0.0, -7.0), 0.0);
        assert_eq!(minsum_f(0.0, 7.0), 0.0);
        assert_eq!(minsum_f(-1.0, -4.0), 1.0);
        assert_eq!(minsum_g(2.0, 3.0, 0), 5.0);
        assert_eq!(minsum_g(2.0, 3.0, 1), 1.0);
        assert_eq!(minsum_g(0.0, 3.5, 1), 3.5);
    }

    #[test]
    fn hard_llr_mapping() {
        let mut c = BitVector::zeros(256);
        c.set(1, true);
        let llr = LlrVector::from_hard(&c, 8).unwrap();
        assert!((llr.values()[0] - (248.0f64 / 8.0).ln()).abs() < 1e-12);
        assert!((llr.values()[0] - 3.434).abs() < 1e-3);
        assert_eq!(llr.values()[1], -llr.values()[0]);
        assert!(LlrVector::from_hard(&c, 128).is_err());
        assert!(LlrVector::from_hard(&c, 0).is_err());
    }

    #[test]
    fn llr_vector_rejects_non_finite_and_saturates() {
        assert!(LlrVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(LlrVector::new(vec![f64::NAN]).is_err());
        assert_eq!(
            LlrVector::new(vec![100.0, -100.0]).unwrap().values(),
            &[30.0, -30.0]
        );
    }

    #[test]
    fn noiseless_n4_trace() {
        let c = BitVector::from_bits(&[1, 1, 0, 0]);
        let llr = LlrVector::from_hard(&c, 1).unwrap();
        let r = sc_decode(&llr, &[1, 3], &BitVector::zeros(2)).unwrap();
        assert_eq!(r.u_hat.to_bits(), vec![0, 1, 0, 0]);
        assert_eq!(r.info_bits(&[1, 3]).unwrap().to_bits(), vec![1, 0]);
        assert_eq!(r.residual_weight, 0);
        assert_eq!(r.x_hat, c);
        // n log n
        assert_eq!(r.fg_evals, 8);
    }

    #[test]
    fn all_zero_input_decodes_to_zero() {
        for n in [4usize, 8, 64] {
            let llr = LlrVector::from_hard(&BitVector::zeros(n), 1).unwrap();
            let info: Vec<usize> = (n / 2..n).collect();
            let r = sc_decode(&llr, &info, &BitVector::zeros(n / 2)).unwrap();
            assert!(r.u_hat.is_zero());
        }
    }

    #[test]
    fn frozen_values_are_respected() {
        let n = 16;
        let info = [7, 11, 13, 14, 15];
        let frozen = BitVector::from_bits(&[1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0]);
        // Random-looking channel, decisions on frozen slots must still follow the supplied values.
        let llr = LlrVector::new((0..n).map(|i| ((i * 7 % 5) as f64) - 2.0).collect()).unwrap();
        let frozen_set = complement(&info, n);
        for order in [DecodeOrder::Natural, DecodeOrder::BitReversed] {
            let r = ScDecoder::with_order(n, order)
                .unwrap()
                .decode(&llr, &info, &frozen)
                .unwrap();
            assert_eq!(r.u_hat.select(&frozen_set).unwrap(), frozen);
            assert_eq!(r.x_hat, polar_transform(&r.u_hat).unwrap());
        }
    }

    /// n = 8, k = 4: every weight-1 error on every codeword is decoded to the
    /// unique codeword at distance 1 whenever one exists.
    #[test]
    fn single_errors_n8_against_nearest_codeword() {
        let spec = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&spec, 8, 4, None).unwrap();
        let codewords: Vec<BitVector> = (0u8..16)
            .map(|m| {
                let u = BitVector::from_bools((0..4).map(|i| m >> i & 1 == 1));
                code.encode(&u, &BitVector::zeros(4)).unwrap()
            })
            .collect();
        let mut checked = 0;
        for cw in &codewords {
            for pos in 0..8 {
                let mut y = cw.clone();
                y.flip(pos);
                let near: Vec<&BitVector> = codewords
                    .iter()
                    .filter(|c| c.distance(&y).unwrap() <= 1)
                    .collect();
                let r = sc_decode(
                    &LlrVector::from_hard(&y, 1).unwrap(),
                    code.info_set(),
                    &BitVector::zeros(4),
                )
                .unwrap();
                if near.len() == 1 {
                    assert_eq!(&r.x_hat, near[0], "codeword {cw:?} error at {pos}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn both_orders_recover_codewords_and_reencode() {
        let spec = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&spec, 32, 12, None).unwrap();
        for order in [DecodeOrder::Natural, DecodeOrder::BitReversed] {
            let mut dec = ScDecoder::with_order(32, order).unwrap();
            assert_eq!(dec.order(), order);
            for x in 0u32..200 {
                let u = BitVector::from_bools(
                    (0..12).map(|i| x.wrapping_mul(2654435761) >> i & 1 == 1),
                );
                let cw = code.encode(&u, &BitVector::zeros(20)).unwrap();
                let r = dec
                    .decode(
                        &LlrVector::from_hard(&cw, 3).unwrap(),
                        code.info_set(),
                        &BitVector::zeros(20),
                    )
                    .unwrap();
                assert_eq!(r.info_bits(code.info_set()).unwrap(), u);
                assert_eq!(r.x_hat, cw);
                assert_eq!(r.fg_evals, 32 * 5);
            }
        }
    }

    #[test]
    fn bit_reversal_table_values() {
        assert_eq!(bit_reversal_table(1), vec![0]);
        assert_eq!(bit_reversal_table(2), vec![0, 1]);
        assert_eq!(bit_reversal_table(8), vec![0, 4, 2, 6, 1, 5, 3, 7]);
    }

    #[test]
    fn erasures_map_to_zero() {
        let bits = BitVector::from_bits(&[1, 0, 1, 1]);
        let llr = LlrVector::from_erasures(&bits, &[false, true, false, false]).unwrap();
        assert_eq!(llr.values(), &[-30.0, 0.0, -30.0, -30.0]);
    }

    #[test]
    fn dimension_errors() {
        let llr = LlrVector::from_hard(&BitVector::zeros(8), 1).unwrap();
        assert!(sc_decode(&llr, &[1, 2], &BitVector::zeros(5)).is_err());
        assert!(sc_decode(&llr, &[2, 1], &BitVector::zeros(6)).is_err());
        assert!(ScDecoder::new(8)
            .unwrap()
            .decode(
                &LlrVector::from_hard(&BitVector::zeros(16), 1).unwrap(),
                &[1],
                &BitVector::zeros(7)
            )
            .is_err());
        assert!(ScDecoder::new(6).is_err());
    }
}
