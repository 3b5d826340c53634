use super::cipher::{decrypt_counted, encrypt_counted, sample_error};
use super::drbg::{CtrDrbg, SEED_LEN};
use super::keys::{keygen_with, KeygenOptions};
use super::params::Params;
use crate::error::{param, Result};
use crate::gf2::BitVector;
use crate::perf::OpCounters;
use crate::scdec::ScDecoder;
use rand_core::RngCore;

/// Measured decryption failure rate at one error weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightTrial {
    pub t: usize,
    pub trials: usize,
    pub failures: usize,
    /// Successful decryptions that returned the wrong message.
    pub wrong_messages: usize,
}

impl WeightTrial {
    /// Detected failures per trial.
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    /// Detected failures plus undetected wrong messages per trial.
    pub fn error_rate(&self) -> f64 {
        (self.failures + self.wrong_messages) as f64 / self.trials as f64
    }
}

/// Runs `trials` random encrypt/decrypt cycles for one key. Messages and
/// error vectors come from the DRBG keyed by `seed`.
pub fn measure_failure_rate(
    params: &Params,
    options: &KeygenOptions,
    trials: usize,
    seed: &[u8; SEED_LEN],
) -> Result<WeightTrial> {
    let (pk, sk) = keygen_with(params, seed, options)?;
    let mut rng = CtrDrbg::new(&derive_seed(seed, 1));
    let mut decoder = ScDecoder::new(params.n)?;
    let mut scratch = OpCounters::default();
    let mut failures = 0;
    let mut wrong_messages = 0;
    for _ in 0..trials {
        let m = random_message(params.k, &mut rng);
        let e = sample_error(params.n, params.t, &mut rng)?;
        let c = encrypt_counted(&m, &pk, &e, &mut scratch)?;
        match decrypt_counted(&c, &sk, &mut decoder, &mut scratch) {
            Ok(got) if got == m => {}
            Ok(_) => wrong_messages += 1,
            Err(crate::Error::DecryptionFailure { .. }) => failures += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(WeightTrial {
        t: params.t,
        trials,
        failures,
        wrong_messages,
    })
}

/// Largest error weight whose measured error rate (detected failures plus
/// wrong messages) stays at or below
/// `target`, scanning upward from 1 and stopping at the first miss. Returns
/// `None` when even `t = 1` misses the target.
pub fn suggest_error_weight(
    n: usize,
    k: usize,
    epsilon: f64,
    options: &KeygenOptions,
    target: f64,
    trials: usize,
    seed: &[u8; SEED_LEN],
) -> Result<Option<usize>> {
    if trials == 0 {
        return param("need at least one trial");
    }
    let mut best = None;
    for t in 1..n.div_ceil(2) {
        let params = Params {
            n,
            k,
            t,
            epsilon,
            label: None,
        };
        let trial = measure_failure_rate(&params, options, trials, seed)?;
        if trial.error_rate() > target {
            break;
        }
        best = Some(t);
    }
    Ok(best)
}

pub(crate) fn random_message<R: RngCore + ?Sized>(k: usize, rng: &mut R) -> BitVector {
    let mut bytes = vec![0u8; k.div_ceil(8)];
    rng.fill_bytes(&mut bytes);
    if !k.is_multiple_of(8) {
        let last = bytes.len() - 1;
        bytes[last] &= (1u8 << (k % 8)) - 1;
    }
    BitVector::from_bytes(k, &bytes).expect("masked to k bits")
}

/// Independent sub-seed for a labelled purpose.
pub(crate) fn derive_seed(seed: &[u8; SEED_LEN], purpose: u8) -> [u8; SEED_LEN] {
    let mut rng = CtrDrbg::new(seed);
    let mut skip = vec![0u8; 32 * purpose as usize];
    rng.fill_bytes(&mut skip);
    let mut out = [0u8; SEED_LEN];
    rng.fill_bytes(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_message_has_k_bits() {
        let mut rng = CtrDrbg::new(&[0; 32]);
        for k in [1, 7, 8, 13, 64] {
            assert_eq!(random_message(k, &mut rng).len(), k);
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let s = [1; 32];
        assert_ne!(derive_seed(&s, 0), derive_seed(&s, 1));
        assert_eq!(derive_seed(&s, 2), derive_seed(&s, 2));
    }

    #[test]
    fn low_rate_code_tolerates_errors() {
        let opts = KeygenOptions {
            window: Some(16),
            ..Default::default()
        };
        let t = suggest_error_weight(64, 4, 0.5, &opts, 0.05, 200, &[3; 32])
            .unwrap()
            .unwrap();
        assert!(t >= 2, "t = {t}");
    }
}
