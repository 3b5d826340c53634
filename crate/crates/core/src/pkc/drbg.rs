//! Counter-mode DRBG over AES-128, following the CTR_DRBG construction
//! without a derivation function: the 32-byte seed is the full seed material
//! (key length + block length), and no reseeding or prediction resistance is
//! provided.
//!
//! Without a derivation function the seed is XORed straight into the
//! working key and counter, so seeds must be uniformly random: two seeds
//! that differ only in their last 16 bytes yield shifted copies of the same
//! stream.
//!
//! The output stream is the concatenation of fixed-size generate requests of
//! [`REQUEST_BYTES`], so the bytes produced do not depend on how a caller
//! chunks its reads.

use aes::cipher::{BlockEncrypt, KeyInit};
use aes::{Aes128, Block};
use rand_core::{impls, CryptoRng, RngCore};

use crate::error::{param, Result};

pub const SEED_LEN: usize = 32;
const KEY_LEN: usize = 16;
const BLOCK_LEN: usize = 16;
pub const REQUEST_BYTES: usize = 1024;

/// Deterministic generator keyed by a 32-byte seed.
pub struct CtrDrbg {
    cipher: Aes128,
    v: u128,
    buf: [u8; REQUEST_BYTES],
    pos: usize,
}

impl CtrDrbg {
    pub fn new(seed: &[u8; SEED_LEN]) -> Self {
        let mut drbg = Self {
            cipher: Aes128::new(&[0u8; KEY_LEN].into()),
            v: 0,
            buf: [0; REQUEST_BYTES],
            pos: REQUEST_BYTES,
        };
        drbg.update(seed);
        drbg
    }

    /// Accepts a seed slice, which must be exactly 32 bytes.
    pub fn from_slice(seed: &[u8]) -> Result<Self> {
        let seed: &[u8; SEED_LEN] = seed.try_into().or_else(|_| {
            param(format!(
                "DRBG seed must be {SEED_LEN} bytes, got {}",
                seed.len()
            ))
        })?;
        Ok(Self::new(seed))
    }

    fn next_block(&mut self) -> [u8; BLOCK_LEN] {
        self.v = self.v.wrapping_add(1);
        let mut block = Block::from(self.v.to_be_bytes());
        self.cipher.encrypt_block(&mut block);
        block.into()
    }

    fn update(&mut self, provided: &[u8; SEED_LEN]) {
        let mut temp = [0u8; SEED_LEN];
        for chunk in temp.chunks_mut(BLOCK_LEN) {
            chunk.copy_from_slice(&self.next_block());
        }
        for (t, p) in temp.iter_mut().zip(provided) {
            *t ^= p;
        }
        self.cipher = Aes128::new(aes::cipher::generic_array::GenericArray::from_slice(
            &temp[..KEY_LEN],
        ));
        self.v = u128::from_be_bytes(temp[KEY_LEN..].try_into().expect("16-byte block"));
    }

    fn generate_request(&mut self) {
        for i in 0..REQUEST_BYTES / BLOCK_LEN {
            let block = self.next_block();
            self.buf[i * BLOCK_LEN..(i + 1) * BLOCK_LEN].copy_from_slice(&block);
        }
        self.update(&[0u8; SEED_LEN]);
        self.pos = 0;
    }
}

impl RngCore for CtrDrbg {
    fn next_u32(&mut self) -> u32 {
        impls::next_u32_via_fill(self)
    }

    fn next_u64(&mut self) -> u64 {
        impls::next_u64_via_fill(self)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        let mut filled = 0;
        while filled < dest.len() {
            if self.pos == REQUEST_BYTES {
                self.generate_request();
            }
            let take = (REQUEST_BYTES - self.pos).min(dest.len() - filled);
            dest[filled..filled + take].copy_from_slice(&self.buf[self.pos..self.pos + take]);
            self.pos += take;
            filled += take;
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand_core::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

impl CryptoRng for CtrDrbg {}

/// The first `n_bytes` of the stream for `seed`.
pub fn drbg_stream(seed: &[u8], n_bytes: usize) -> Result<Vec<u8>> {
    let mut drbg = CtrDrbg::from_slice(seed)?;
    let mut out = vec![0u8; n_bytes];
    drbg.fill_bytes(&mut out);
    Ok(out)
}

/// Uniform integer in `0..bound` by rejection from 64-bit draws.
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: usize) -> usize {
    assert!(bound > 0, "empty range");
    let bound = bound as u64;
    let limit = u64::MAX - u64::MAX % bound;
    loop {
        let r = rng.next_u64();
        if r < limit {
            return (r % bound) as usize;
        }
    }
}

/// Uniform f64 in `[0, 1)` with 53 bits of precision.
pub fn uniform_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws `count` distinct entries of `pool` by a partial Fisher–Yates
/// shuffle, in draw order.
pub fn sample_without_replacement<R: RngCore + ?Sized>(
    rng: &mut R,
    pool: &[usize],
    count: usize,
) -> Vec<usize> {
    assert!(count <= pool.len());
    let mut pool = pool.to_vec();
    for i in 0..count {
        let j = i + uniform_below(rng, pool.len() - i);
        pool.swap(i, j);
    }
    pool.truncate(count);
    pool
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let seed = [7u8; 32];
        assert_eq!(
            drbg_stream(&seed, 3000).unwrap(),
            drbg_stream(&seed, 3000).unwrap()
        );
        assert!(drbg_stream(&seed, 0).unwrap().is_empty());
    }

    #[test]
    fn wrong_seed_length() {
        assert!(drbg_stream(&[0u8; 31], 4).is_err());
        assert!(drbg_stream(&[0u8; 33], 4).is_err());
    }

    #[test]
    fn stream_is_independent_of_read_chunking() {
        let seed = [3u8; 32];
        let whole = drbg_stream(&seed, 2500).unwrap();
        let mut rng = CtrDrbg::new(&seed);
        let mut pieces = Vec::new();
        for size in [1usize, 15, 1000, 17, 1467] {
            let mut b = vec![0u8; size];
            rng.fill_bytes(&mut b);
            pieces.extend(b);
        }
        assert_eq!(pieces, whole);
    }

    /// Reference values from an independent AES-128 implementation of the
    /// same construction; the second slice straddles the first reseed.
    #[test]
    fn known_answers() {
        let zero = drbg_stream(&[0u8; 32], 1040).unwrap();
        assert_eq!(
            hex::encode(&zero[..32]),
            "d40e25d386f068ba00cd8671f347893244d0417c2af3bd62661585aef6d75d22"
        );
        assert_eq!(
            hex::encode(&zero[1016..1040]),
            "c6c283433d4566a972658f9f2f096641f3ff122a4c949beb"
        );
        let seed: Vec<u8> = (0u8..32).collect();
        let counting = drbg_stream(&seed, 1040).unwrap();
        assert_eq!(
            hex::encode(&counting[..32]),
            "1686ffcf9f358be74452e647ba156aab05135797117fd1ab317d318c660e3d18"
        );
        assert_eq!(
            hex::encode(&counting[1016..1040]),
            "972abac1a5b227f46513c09ab88f6a06584d3b90036e29bf"
        );
    }

    #[test]
    fn one_bit_seed_change_avalanches() {
        let a = [0u8; 32];
        let mut b = a;
        b[17] ^= 0x10;
        let sa = drbg_stream(&a, 1024).unwrap();
        let sb = drbg_stream(&b, 1024).unwrap();
        let diff: u32 = sa.iter().zip(&sb).map(|(x, y)| (x ^ y).count_ones()).sum();
        assert!(diff as f64 >= 0.30 * 8.0 * 1024.0, "diff = {diff}");
    }

    #[test]
    fn uniform_below_stays_in_range() {
        let mut rng = CtrDrbg::new(&[1u8; 32]);
        for bound in [1usize, 2, 3, 7, 1000] {
            for _ in 0..200 {
                assert!(uniform_below(&mut rng, bound) < bound);
            }
        }
        for _ in 0..200 {
            let u = uniform_unit(&mut rng);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn sampling_without_replacement_is_distinct() {
        let mut rng = CtrDrbg::new(&[2u8; 32]);
        let pool: Vec<usize> = (10..30).collect();
        let mut s = sample_without_replacement(&mut rng, &pool, 20);
        s.sort_unstable();
        assert_eq!(s, pool);
    }
}
