//! Polar code construction over the binary erasure channel.
//!
//! Bit-channel reliabilities come from the Bhattacharyya doubling recursion
//! with the "bad" branch `2z - z²` in the first half and the "good" branch
//! `z²` in the second half of each doubled vector, in natural index order.
//! Values are kept as natural logarithms: at n = 1024 the most reliable
//! channels fall far below the smallest positive `f64`.

use std::sync::Arc;

use crate::error::{param, Result};
use crate::gf2::{check_index_list, kronecker_power_cached, BitMatrix, BitVector};

/// Scaling exponent of the binary erasure channel.
pub const MU_BEC: f64 = 3.627;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Bec,
}

/// Parameters of the underlying binary-input memoryless channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    epsilon: f64,
    mu: f64,
}

impl ChannelSpec {
    /// BEC(ε) with the BEC scaling exponent.
    pub fn bec(epsilon: f64) -> Result<Self> {
        Self::bec_with_mu(epsilon, MU_BEC)
    }

    pub fn bec_with_mu(epsilon: f64, mu: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return param(format!(
                "erasure probability must lie in (0, 1), got {epsilon}"
            ));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return param(format!("scaling exponent must be positive, got {mu}"));
        }
        Ok(Self {
            kind: ChannelKind::Bec,
            epsilon,
            mu,
        })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// I(W) = 1 − ε.
    pub fn capacity(&self) -> f64 {
        1.0 - self.epsilon
    }

    /// Z(W) = ε.
    pub fn bhattacharyya_init(&self) -> f64 {
        self.epsilon
    }
}

/// `log2(n)` for a power of two `n ≥ 2`.
pub fn log2_length(n: usize) -> Result<u32> {
    if n < 2 || !n.is_power_of_two() {
        return param(format!("code length must be a power of two >= 2, got {n}"));
    }
    Ok(n.trailing_zeros())
}

/// `ln(2 − z)` given `ln z`, without cancellation near `z = 1`.
fn ln_two_minus(ln_z: f64) -> f64 {
    (-ln_z.exp_m1()).ln_1p()
}

/// Natural-log Bhattacharyya parameters of all `n` bit-channels.
pub fn bhattacharyya_recursion(spec: &ChannelSpec, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !n.is_power_of_two() {
        return param(format!("code length must be a power of two, got {n}"));
    }
    let mut z = Vec::with_capacity(n);
    z.push(spec.bhattacharyya_init().ln());
    while z.len() < n {
        let half = z.len();
        for i in 0..half {
            let lz = z[i];
            z.push(2.0 * lz);
            z[i] = lz + ln_two_minus(lz);
        }
    }
    Ok(z)
}

/// Indices sorted by ascending Z; equal values keep ascending index order.
pub fn reliability_permutation(z_log: &[f64]) -> Vec<usize> {
    let mut pi: Vec<usize> = (0..z_log.len()).collect();
    pi.sort_by(|&a, &b| z_log[a].total_cmp(&z_log[b]));
    pi
}

/// Largest rate admitted by `R < I(W) − n^{−1/μ}`, clamped at zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateLimit {
    pub rate: f64,
    pub k0: usize,
}

pub fn max_rate_r0(spec: &ChannelSpec, n: usize) -> RateLimit {
    let rate = (spec.capacity() - (n as f64).powf(-1.0 / spec.mu())).max(0.0);
    RateLimit {
        rate,
        k0: (n as f64 * rate).floor() as usize,
    }
}

/// A constructed (n, k) polar code. Indices are 0-based.
#[derive(Clone, Debug)]
pub struct PolarCode {
    n: usize,
    k: usize,
    spec: ChannelSpec,
    z_log: Vec<f64>,
    pi: Vec<usize>,
    info_set: Vec<usize>,
    frozen_set: Vec<usize>,
    generator: Arc<BitMatrix>,
}

/// Row and column slices of `G_n` for a given information set.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSlices {
    /// Rows of `G_n` indexed by the information set, k×n.
    pub info_rows: BitMatrix,
    /// Rows of `G_n` indexed by the frozen set, (n−k)×n.
    pub frozen_rows: BitMatrix,
    /// Columns of `G_n` indexed by the frozen set, n×(n−k): the transposed parity check.
    pub parity_check_t: BitMatrix,
}

/// Union bound on the SC block error probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DfrBound {
    pub raw: f64,
    pub clamped: f64,
}

impl PolarCode {
    /// Constructs the code. Without an override the information set is the
    /// `k` most reliable channels; with one, it is taken verbatim (it must be
    /// a strictly ascending k-subset of `0..n`).
    pub fn build(
        spec: &ChannelSpec,
        n: usize,
        k: usize,
        info_set_override: Option<&[usize]>,
    ) -> Result<Self> {
        let m = log2_length(n)?;
        if k == 0 || k >= n {
            return param(format!(
                "dimension must satisfy 1 <= k < n, got k = {k}, n = {n}"
            ));
        }
        let z_log = bhattacharyya_recursion(spec, n)?;
        let pi = reliability_permutation(&z_log);
        let info_set = match info_set_override {
            Some(set) => {
                if set.len() != k {
                    return param(format!(
                        "information set override has {} entries, expected {k}",
                        set.len()
                    ));
                }
                check_index_list(set, n, "information set")?;
                set.to_vec()
            }
            None => {
                let mut set = pi[..k].to_vec();
                set.sort_unstable();
                set
            }
        };
        let frozen_set = complement(&info_set, n);
        Ok(Self {
            n,
            k,
            spec: *spec,
            z_log,
            pi,
            info_set,
            frozen_set,
            generator: kronecker_power_cached(m)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn channel(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn rate(&self) -> f64 {
        self.info_set.len() as f64 / self.n as f64
    }

    pub fn z_log(&self) -> &[f64] {
        &self.z_log
    }

    pub fn z_linear(&self) -> Vec<f64> {
        self.z_log.iter().map(|z| z.exp()).collect()
    }

    /// Reliability order π_n, most reliable first.
    pub fn reliability_order(&self) -> &[usize] {
        &self.pi
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn frozen_set(&self) -> &[usize] {
        &self.frozen_set
    }

    /// Shared `G_n`.
    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn generator_slices(&self) -> GeneratorSlices {
        let all: Vec<usize> = (0..self.n).collect();
        let g = &self.generator;
        // Index lists are validated at construction.
        GeneratorSlices {
            info_rows: g.submatrix(&self.info_set, &all).expect("valid info set"),
            frozen_rows: g
                .submatrix(&self.frozen_set, &all)
                .expect("valid frozen set"),
            parity_check_t: g
                .submatrix(&all, &self.frozen_set)
                .expect("valid frozen set"),
        }
    }

    /// `x = u_A G_A + u_Ac G_Ac`.
    pub fn encode(&self, u_info: &BitVector, u_frozen: &BitVector) -> Result<BitVector> {
        if u_info.len() != self.k || u_frozen.len() != self.n - self.k {
            return param(format!(
                "encode expects {} info and {} frozen bits, got {} and {}",
                self.k,
                self.n - self.k,
                u_info.len(),
                u_frozen.len()
            ));
        }
        let mut u = BitVector::zeros(self.n);
        for (bit, &pos) in u_info.iter().zip(&self.info_set) {
            u.set(pos, bit);
        }
        for (bit, &pos) in u_frozen.iter().zip(&self.frozen_set) {
            u.set(pos, bit);
        }
        polar_transform(&u)
    }

    /// Sum of Z over the information set.
    pub fn dfr_bound(&self) -> DfrBound {
        dfr_bound_for(&self.z_log, &self.info_set)
    }

    /// Minimum Hamming distance of the code with a zero frozen part.
    pub fn min_distance(&self) -> usize {
        min_distance_for(&self.info_set)
    }
}

/// Minimum distance of the code spanned by rows `info_set` of `F^{⊗m}`.
/// Row `i` has weight `2^{popcount(i)}`, and the minimum distance of such a
/// code equals its lightest generator row.
pub fn min_distance_for(info_set: &[usize]) -> usize {
    info_set
        .iter()
        .map(|&i| 1usize << i.count_ones())
        .min()
        .unwrap_or(0)
}

pub fn dfr_bound_for(z_log: &[f64], info_set: &[usize]) -> DfrBound {
    let raw: f64 = info_set.iter().map(|&i| z_log[i].exp()).sum();
    DfrBound {
        raw,
        clamped: raw.clamp(0.0, 1.0),
    }
}

/// Sorted complement of a sorted subset of `0..n`.
pub fn complement(set: &[usize], n: usize) -> Vec<usize> {
    let mut member = vec![false; n];
    for &i in set {
        member[i] = true;
    }
    (0..n).filter(|&i| !member[i]).collect()
}

/// `x = u·F^{⊗m}` by the in-place butterfly, O(n log n).
pub fn polar_transform(u: &BitVector) -> Result<BitVector> {
    let n = u.len();
    log2_length(n)?;
    let mut x: Vec<u8> = u.to_bits();
    butterfly_in_place(&mut x);
    Ok(BitVector::from_bits(&x))
}

pub(crate) fn butterfly_in_place(x: &mut [u8]) {
    let n = x.len();
    let mut half = 1;
    while half < n {
        for block in x.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(v: &[f64]) -> Vec<f64> {
        v.iter().map(|z| z.exp()).collect()
    }

    fn close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn channel_spec_basics() {
        let c = ChannelSpec::bec(0.3).unwrap();
        assert!((c.capacity() - 0.7).abs() < 1e-15);
        assert_eq!(c.bhattacharyya_init(), 0.3);
        assert_eq!(c.mu(), MU_BEC);
        for bad in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(ChannelSpec::bec(bad).is_err());
        }
    }

    #[test]
    fn recursion_hand_values() {
        let c = ChannelSpec::bec(0.5).unwrap();
        close(
            &lin(&bhattacharyya_recursion(&c, 2).unwrap()),
            &[0.75, 0.25],
        );
        close(
            &lin(&bhattacharyya_recursion(&c, 4).unwrap()),
            &[0.9375, 0.4375, 0.5625, 0.0625],
        );
        assert!(bhattacharyya_recursion(&c, 6).is_err());
    }

    #[test]
    fn recursion_stays_finite_at_n1024() {
        let c = ChannelSpec::bec(0.5).unwrap();
        let z = bhattacharyya_recursion(&c, 1024).unwrap();
        let best = z.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((best - 1024.0 * 0.5f64.ln()).abs() < 1e-9);
        assert!(z.iter().all(|v| v.is_finite() && *v <= 0.0));
    }

    #[test]
    fn permutation_examples() {
        let z4: Vec<f64> = [0.9375f64, 0.4375, 0.5625, 0.0625]
            .iter()
            .map(|v| v.ln())
            .collect();
        // 1-based (4,2,3,1)
        assert_eq!(reliability_permutation(&z4), vec![3, 1, 2, 0]);
        assert_eq!(reliability_permutation(&[0.0; 5]), vec![0, 1, 2, 3, 4]);
        assert_eq!(reliability_permutation(&[-3.0, -2.0, -1.0]), vec![0, 1, 2]);
    }

    #[test]
    fn rate_limit_examples() {
        let half = ChannelSpec::bec(0.5).unwrap();
        let r = max_rate_r0(&half, 1024);
        assert!((r.rate - 0.3521).abs() < 1e-4);
        assert_eq!(r.k0, 360);
        let r = max_rate_r0(&ChannelSpec::bec(0.1).unwrap(), 1024);
        assert!((r.rate - 0.7521).abs() < 1e-4);
        assert_eq!(r.k0, 770);
        let r = max_rate_r0(&half, 4);
        assert_eq!(r.rate, 0.0);
        assert_eq!(r.k0, 0);
    }

    #[test]
    fn build_code_examples() {
        let c = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&c, 4, 2, None).unwrap();
        assert_eq!(code.info_set(), &[1, 3]);
        assert_eq!(code.frozen_set(), &[0, 2]);
        assert_eq!(code.rate(), 0.5);

        let code = PolarCode::build(&c, 4, 3, None).unwrap();
        assert_eq!(code.frozen_set(), &[0]);

        let code = PolarCode::build(&c, 4, 2, Some(&[0, 2])).unwrap();
        assert_eq!(code.info_set(), &[0, 2]);

        assert!(PolarCode::build(&c, 4, 2, Some(&[1])).is_err());
        assert!(PolarCode::build(&c, 4, 2, Some(&[1, 4])).is_err());
        assert!(PolarCode::build(&c, 4, 0, None).is_err());
        assert!(PolarCode::build(&c, 4, 4, None).is_err());
        assert!(PolarCode::build(&c, 12, 4, None).is_err());
    }

    #[test]
    fn slices_n4() {
        let c = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&c, 4, 2, None).unwrap();
        let s = code.generator_slices();
        assert_eq!(
            s.info_rows.to_rows(),
            vec![vec![1, 1, 0, 0], vec![1, 1, 1, 1]]
        );
        assert_eq!(
            s.frozen_rows.to_rows(),
            vec![vec![1, 0, 0, 0], vec![1, 0, 1, 0]]
        );
        assert_eq!(
            s.parity_check_t.to_rows(),
            vec![vec![1, 0], vec![1, 0], vec![1, 1], vec![1, 1]]
        );
        for x in 0u8..4 {
            let u = BitVector::from_bits(&[x & 1, x >> 1]);
            let cw = code.encode(&u, &BitVector::zeros(2)).unwrap();
            assert!(s.parity_check_t.vec_mul(&cw).unwrap().is_zero());
        }
    }

    #[test]
    fn encode_examples() {
        let c = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&c, 4, 2, None).unwrap();
        let x = code
            .encode(&BitVector::from_bits(&[1, 0]), &BitVector::zeros(2))
            .unwrap();
        assert_eq!(x.to_bits(), vec![1, 1, 0, 0]);
        assert!(code
            .encode(&BitVector::zeros(2), &BitVector::zeros(2))
            .unwrap()
            .is_zero());
        assert!(code
            .encode(&BitVector::zeros(3), &BitVector::zeros(1))
            .is_err());
    }

    #[test]
    fn butterfly_matches_generator() {
        let g = crate::gf2::kronecker_power(4).unwrap();
        for x in 0u32..(1 << 16) {
            if x % 97 != 0 {
                continue;
            }
            let u = BitVector::from_bools((0..16).map(|i| x >> i & 1 == 1));
            assert_eq!(polar_transform(&u).unwrap(), g.vec_mul(&u).unwrap());
        }
    }

    #[test]
    fn dfr_bound_examples() {
        let c = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&c, 4, 2, None).unwrap();
        assert!((code.dfr_bound().raw - 0.5).abs() < 1e-12);
        assert_eq!(dfr_bound_for(code.z_log(), &[]).raw, 0.0);

        let big = PolarCode::build(&c, 64, 63, None).unwrap();
        let mut prev = 0.0;
        for k in 0..=64 {
            let mut set = big.reliability_order()[..k].to_vec();
            set.sort_unstable();
            let b = dfr_bound_for(big.z_log(), &set);
            assert!(b.raw >= prev);
            assert!(b.clamped <= 1.0);
            prev = b.raw;
        }
    }

    #[test]
    fn min_distance_is_lightest_row() {
        let spec = ChannelSpec::bec(0.5).unwrap();
        for (n, k) in [(16, 4), (64, 16), (256, 72), (256, 120)] {
            let code = PolarCode::build(&spec, n, k, None).unwrap();
            let lightest = code
                .info_set()
                .iter()
                .map(|&i| code.generator().row(i).weight())
                .min()
                .unwrap();
            assert_eq!(code.min_distance(), lightest);
        }
        assert_eq!(
            PolarCode::build(&spec, 256, 72, None)
                .unwrap()
                .min_distance(),
            16
        );
        assert_eq!(
            PolarCode::build(&spec, 256, 120, None)
                .unwrap()
                .min_distance(),
            8
        );
    }

    #[test]
    fn min_distance_brute_force_n16() {
        let spec = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&spec, 16, 5, None).unwrap();
        let frozen = BitVector::zeros(11);
        let best = (1u32..32)
            .map(|x| {
                let u = BitVector::from_bools((0..5).map(|i| x >> i & 1 == 1));
                code.encode(&u, &frozen).unwrap().weight()
            })
            .min()
            .unwrap();
        assert_eq!(code.min_distance(), best);
    }
}
