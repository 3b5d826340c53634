use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::gf2::BitVector;
use crate::pkc::{random_message, CtrDrbg, SEED_LEN};
use crate::polar::{ChannelSpec, PolarCode};
use crate::scdec::{LlrVector, ScDecoder};

/// Empirical SC block error rate over a simulated erasure channel next to
/// the union bound `Σ_{i∈A} Z_i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfrEstimate {
    pub trials: usize,
    pub failures: usize,
    pub empirical: f64,
    pub bound: f64,
    pub bound_raw: f64,
    /// Binomial standard deviation of the failure fraction at the bound.
    pub sigma: f64,
    /// `empirical ≤ bound + 3σ`.
    pub within_bound: bool,
}

/// Sends random information words with a zero frozen part over BEC
/// (`channel`), SC-decodes them and counts blocks with any wrong information
/// bit. The code's own design channel supplies the bound.
pub fn dfr_montecarlo(
    code: &PolarCode,
    channel: &ChannelSpec,
    trials: usize,
    seed: &[u8; SEED_LEN],
) -> Result<DfrEstimate> {
    if trials < 100 {
        return param(format!("need at least 100 trials, got {trials}"));
    }
    let n = code.n();
    let mut rng = CtrDrbg::new(seed);
    let mut decoder = ScDecoder::new(n)?;
    let frozen = BitVector::zeros(n - code.k());
    let eps = channel.epsilon();
    let mut failures = 0;
    for _ in 0..trials {
        let u = random_message(code.k(), &mut rng);
        let x = code.encode(&u, &frozen)?;
        let erased: Vec<bool> = (0..n)
            .map(|_| crate::pkc::drbg::uniform_unit(&mut rng) < eps)
            .collect();
        let llr = LlrVector::from_erasures(&x, &erased)?;
        let r = decoder.decode(&llr, code.info_set(), &frozen)?;
        if r.info_bits(code.info_set())? != u {
            failures += 1;
        }
    }
    let bound = code.dfr_bound();
    let p = bound.clamped;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let empirical = failures as f64 / trials as f64;
    Ok(DfrEstimate {
        trials,
        failures,
        empirical,
        bound: p,
        bound_raw: bound.raw,
        sigma,
        within_bound: empirical <= p + 3.0 * sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_limit_has_no_failures() {
        let ch = ChannelSpec::bec(1e-6).unwrap();
        let code = PolarCode::build(&ch, 64, 16, None).unwrap();
        let est = dfr_montecarlo(&code, &ch, 1000, &[0; 32]).unwrap();
        assert_eq!(est.failures, 0);
        assert!(est.within_bound);
    }

    #[test]
    fn tiny_code_bound() {
        let ch = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&ch, 4, 2, None).unwrap();
        let est = dfr_montecarlo(&code, &ch, 100, &[1; 32]).unwrap();
        assert!((est.bound - 0.5).abs() < 1e-12);
    }

    #[test]
    fn too_few_trials() {
        let ch = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&ch, 4, 2, None).unwrap();
        assert!(dfr_montecarlo(&code, &ch, 99, &[1; 32]).is_err());
    }
}
