use rand_core::RngCore;

use super::drbg::sample_without_replacement;
use super::keys::{PublicKey, SecretKey};
use crate::error::{param, Error, Result};
use crate::gf2::BitVector;
use crate::perf::OpCounters;
use crate::scdec::{LlrVector, ScDecoder};

/// One encrypted block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub n: usize,
    pub t: usize,
    pub payload: BitVector,
}

/// Weight-exactly-`t` vector of length `n` with positions drawn uniformly
/// without replacement.
pub fn sample_error<R: RngCore + ?Sized>(n: usize, t: usize, rng: &mut R) -> Result<BitVector> {
    if t == 0 || t >= n {
        return param(format!(
            "error weight must satisfy 0 < t < n, got t = {t}, n = {n}"
        ));
    }
    let all: Vec<usize> = (0..n).collect();
    let mut e = BitVector::zeros(n);
    for pos in sample_without_replacement(rng, &all, t) {
        e.set(pos, true);
    }
    Ok(e)
}

/// `c = m·[I_k | Q] + e` with a fresh weight-t error.
pub fn encrypt<R: RngCore + ?Sized>(
    m: &BitVector,
    pk: &PublicKey,
    rng: &mut R,
) -> Result<Ciphertext> {
    let p = pk.params();
    let e = sample_error(p.n, p.t, rng)?;
    encrypt_with_error(m, pk, &e)
}

/// Deterministic core of [`encrypt`] with a caller-supplied error vector.
pub fn encrypt_with_error(m: &BitVector, pk: &PublicKey, e: &BitVector) -> Result<Ciphertext> {
    encrypt_counted(m, pk, e, &mut OpCounters::default())
}

pub fn encrypt_counted(
    m: &BitVector,
    pk: &PublicKey,
    e: &BitVector,
    counters: &mut OpCounters,
) -> Result<Ciphertext> {
    let p = pk.params();
    if m.len() != p.k {
        return param(format!("message has {} bits, expected {}", m.len(), p.k));
    }
    if e.len() != p.n {
        return param(format!(
            "error vector has {} bits, expected {}",
            e.len(),
            p.n
        ));
    }
    let (parity, xors) = pk.q().vec_mul_counted(m)?;
    let mut c = m.concat(&parity);
    c.xor_words(e);
    counters.xor_bits += xors + p.n as u64;
    Ok(Ciphertext {
        n: p.n,
        t: p.t,
        payload: c,
    })
}

pub fn decrypt(c: &Ciphertext, sk: &SecretKey) -> Result<BitVector> {
    let mut decoder = ScDecoder::new(sk.params().n)?;
    decrypt_counted(c, sk, &mut decoder, &mut OpCounters::default())
}

/// `c' = cP⁻¹`, SC-decode `c'` against the secret information set with a
/// zero frozen part, read `û` at the information positions and return
/// `m = û_A·S`. Fails when the decoded codeword is more than `t` away from
/// `c'`.
pub fn decrypt_counted(
    c: &Ciphertext,
    sk: &SecretKey,
    decoder: &mut ScDecoder,
    counters: &mut OpCounters,
) -> Result<BitVector> {
    let p = sk.params();
    if c.payload.len() != p.n {
        return param(format!(
            "ciphertext has {} bits, expected {}",
            c.payload.len(),
            p.n
        ));
    }
    let c_prime = sk.permutation().apply(&c.payload, true)?;
    counters.perm_moves += p.n as u64;

    let llr = LlrVector::from_hard(&c_prime, p.t)?;
    let frozen = BitVector::zeros(p.n - p.k);
    let decoded = decoder.decode(&llr, sk.info_set(), &frozen)?;
    counters.fg_evals += decoded.fg_evals;
    counters.xor_bits += p.n as u64;
    if decoded.residual_weight > p.t {
        return Err(Error::DecryptionFailure {
            residual: decoded.residual_weight,
            t: p.t,
        });
    }
    let u_info = decoded.info_bits(sk.info_set())?;
    let (m, xors) = sk.s().vec_mul_counted(&u_info)?;
    counters.xor_bits += xors;
    Ok(m)
}
