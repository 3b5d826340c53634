use std::fmt;

use super::drbg::{sample_without_replacement, CtrDrbg, SEED_LEN};
use super::params::Params;
use crate::error::{param, Error, Result};
use crate::gf2::{check_index_list, BitMatrix, Permutation};
use crate::polar::{complement, PolarCode};

/// `Q`, the non-identity part of the systematic encryption matrix `[I_k | Q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PublicKey {
    params: Params,
    q: BitMatrix,
}

impl PublicKey {
    pub fn new(params: Params, q: BitMatrix) -> Result<Self> {
        params.validate()?;
        if q.rows() != params.k || q.cols() != params.n - params.k {
            return param(format!(
                "public matrix is {}x{}, expected {}x{}",
                q.rows(),
                q.cols(),
                params.k,
                params.n - params.k
            ));
        }
        Ok(Self { params, q })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn q(&self) -> &BitMatrix {
        &self.q
    }
}

/// Secret information set plus the matrices derived from it.
#[derive(Clone, PartialEq)]
pub struct SecretKey {
    params: Params,
    seed: [u8; SEED_LEN],
    info_set: Vec<usize>,
    frozen_set: Vec<usize>,
    s: BitMatrix,
    s_inv: BitMatrix,
    perm: Permutation,
}

impl SecretKey {
    /// Rebuilds `S = (G_n)_{A,A}`, `S⁻¹` and `P` from a stored information
    /// set (0-based, strictly ascending) and checks `S` is unit lower triangular.
    pub fn from_parts(params: Params, seed: [u8; SEED_LEN], info_set: Vec<usize>) -> Result<Self> {
        params.validate()?;
        if info_set.len() != params.k {
            return param(format!(
                "secret information set has {} entries, expected {}",
                info_set.len(),
                params.k
            ));
        }
        check_index_list(&info_set, params.n, "secret information set")?;
        let code = PolarCode::build(&params.channel()?, params.n, params.k, Some(&info_set))?;
        let s = code.generator().submatrix(&info_set, &info_set)?;
        if !s.is_unit_lower_triangular() {
            return Err(Error::Structure(
                "scrambler S is not unit lower triangular".into(),
            ));
        }
        let s_inv = s.invert_unit_lower_triangular()?;
        let frozen_set = complement(&info_set, params.n);
        let perm = Permutation::from_partition(&info_set, &frozen_set)?;
        Ok(Self {
            params,
            seed,
            info_set,
            frozen_set,
            s,
            s_inv,
            perm,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn seed(&self) -> &[u8; SEED_LEN] {
        &self.seed
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn frozen_set(&self) -> &[usize] {
        &self.frozen_set
    }

    pub fn s(&self) -> &BitMatrix {
        &self.s
    }

    pub fn s_inv(&self) -> &BitMatrix {
        &self.s_inv
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }
}

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SecretKey")
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

/// Optional overrides for key generation.
#[derive(Clone, Debug, Default)]
pub struct KeygenOptions {
    /// Sampling window size; defaults to `⌊n·R₀⌋`.
    pub window: Option<usize>,
    /// Fixed secret information set (0-based), bypassing sampling.
    pub info_set: Option<Vec<usize>>,
}

/// Key pair with the intermediate matrices, for inspection and tests.
#[derive(Clone, Debug)]
pub struct KeygenTrace {
    pub public: PublicKey,
    pub secret: SecretKey,
    /// `G_{A(s)}`, the rows of `G_n` at the secret information set.
    pub secret_generator: BitMatrix,
    /// `G' = S⁻¹ G_{A(s)} P`.
    pub encryption_matrix: BitMatrix,
}

/// A uniformly random k-subset of the first `window` entries of the
/// reliability order, drawn with the DRBG keyed by `seed`; sorted ascending.
pub fn sample_secret_info_set(
    seed: &[u8; SEED_LEN],
    code: &PolarCode,
    k: usize,
    window: usize,
) -> Result<Vec<usize>> {
    if window > code.n() {
        return param(format!("window {window} exceeds code length {}", code.n()));
    }
    if k > window {
        return param(format!(
            "cannot pick k = {k} channels from a window of {window}; rate limit infeasible"
        ));
    }
    let mut rng = CtrDrbg::new(seed);
    let mut set = sample_without_replacement(&mut rng, &code.reliability_order()[..window], k);
    set.sort_unstable();
    Ok(set)
}

pub fn keygen(params: &Params, seed: &[u8; SEED_LEN]) -> Result<(PublicKey, SecretKey)> {
    keygen_with(params, seed, &KeygenOptions::default())
}

pub fn keygen_with(
    params: &Params,
    seed: &[u8; SEED_LEN],
    options: &KeygenOptions,
) -> Result<(PublicKey, SecretKey)> {
    let trace = keygen_trace(params, seed, options)?;
    Ok((trace.public, trace.secret))
}

/// Runs key generation and keeps the intermediate matrices.
pub fn keygen_trace(
    params: &Params,
    seed: &[u8; SEED_LEN],
    options: &KeygenOptions,
) -> Result<KeygenTrace> {
    params.validate()?;
    let (n, k) = (params.n, params.k);
    let channel = params.channel()?;
    let code = PolarCode::build(&channel, n, k, None)?;

    let info_set = match &options.info_set {
        Some(set) => set.clone(),
        None => {
            let window = options.window.unwrap_or_else(|| params.rate_limit_window());
            if window == k {
                log::warn!(
                    "window equals k = {k}: the information set is fixed by the public \
                     parameters and the key has no secret choice"
                );
            }
            sample_secret_info_set(seed, &code, k, window)?
        }
    };
    let secret = SecretKey::from_parts(params.clone(), *seed, info_set)?;

    let all: Vec<usize> = (0..n).collect();
    let secret_generator = code.generator().submatrix(secret.info_set(), &all)?;
    let permuted = BitMatrix::from_row_vectors(
        n,
        secret_generator
            .row_vectors()
            .iter()
            .map(|row| secret.permutation().apply(row, false))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let encryption_matrix = secret.s_inv().mul(&permuted)?;

    let left: Vec<usize> = (0..k).collect();
    let right: Vec<usize> = (k..n).collect();
    if encryption_matrix.submatrix(&all[..k], &left)? != BitMatrix::identity(k) {
        return Err(Error::Internal(
            "encryption matrix is not in systematic form".into(),
        ));
    }
    let q = encryption_matrix.submatrix(&all[..k], &right)?;
    let public = PublicKey::new(params.clone(), q)?;
    Ok(KeygenTrace {
        public,
        secret,
        secret_generator,
        encryption_matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::ChannelSpec;

    fn small_params() -> Params {
        Params {
            n: 4,
            k: 2,
            t: 1,
            epsilon: 0.5,
            label: None,
        }
    }

    #[test]
    fn worked_example_n4() {
        let opts = KeygenOptions {
            info_set: Some(vec![1, 3]),
            ..Default::default()
        };
        let trace = keygen_trace(&small_params(), &[0; 32], &opts).unwrap();
        assert_eq!(trace.secret.s().to_rows(), vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(
            trace.encryption_matrix.to_rows(),
            vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]
        );
        assert_eq!(trace.public.q().to_rows(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(trace.secret.frozen_set(), &[0, 2]);
    }

    #[test]
    fn keygen_is_deterministic() {
        let p = Params::new(64, 12, 3, 0.5).unwrap();
        let opts = KeygenOptions {
            window: Some(24),
            ..Default::default()
        };
        let a = keygen_with(&p, &[5; 32], &opts).unwrap();
        let b = keygen_with(&p, &[5; 32], &opts).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        let c = keygen_with(&p, &[6; 32], &opts).unwrap();
        assert_ne!(a.1.info_set(), c.1.info_set());
    }

    #[test]
    fn infeasible_window_is_a_parameter_error() {
        // n = 16 at eps = 0.5 has an empty rate-limit window.
        let p = Params::new(16, 4, 2, 0.5).unwrap();
        assert!(matches!(keygen(&p, &[0; 32]), Err(Error::Parameter(_))));
        let opts = KeygenOptions {
            window: Some(3),
            ..Default::default()
        };
        assert!(keygen_with(&p, &[0; 32], &opts).is_err());
        let opts = KeygenOptions {
            window: Some(17),
            ..Default::default()
        };
        assert!(keygen_with(&p, &[0; 32], &opts).is_err());
    }

    #[test]
    fn forced_window_selects_whole_window() {
        let spec = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&spec, 16, 4, None).unwrap();
        let set = sample_secret_info_set(&[9; 32], &code, 6, 6).unwrap();
        let mut expect = code.reliability_order()[..6].to_vec();
        expect.sort_unstable();
        assert_eq!(set, expect);
    }

    #[test]
    fn sampled_set_is_reproducible_and_inside_window() {
        let spec = ChannelSpec::bec(0.5).unwrap();
        let code = PolarCode::build(&spec, 16, 4, None).unwrap();
        let a = sample_secret_info_set(&[4; 32], &code, 4, 8).unwrap();
        assert_eq!(a, sample_secret_info_set(&[4; 32], &code, 4, 8).unwrap());
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        let window = &code.reliability_order()[..8];
        assert!(a.iter().all(|i| window.contains(i)));
    }

    #[test]
    fn secret_key_debug_hides_seed() {
        let sk = SecretKey::from_parts(small_params(), [0xAB; 32], vec![1, 3]).unwrap();
        let shown = format!("{sk:?}");
        assert!(!shown.contains("171"));
        assert!(!shown.to_lowercase().contains("ab, "));
        assert!(!shown.contains("info_set"));
    }

    #[test]
    fn from_parts_rejects_bad_sets() {
        assert!(SecretKey::from_parts(small_params(), [0; 32], vec![1]).is_err());
        assert!(SecretKey::from_parts(small_params(), [0; 32], vec![3, 1]).is_err());
        assert!(SecretKey::from_parts(small_params(), [0; 32], vec![1, 1]).is_err());
        assert!(SecretKey::from_parts(small_params(), [0; 32], vec![1, 4]).is_err());
    }

    #[test]
    fn public_key_dimension_check() {
        assert!(PublicKey::new(small_params(), BitMatrix::zeros(2, 3)).is_err());
        assert!(PublicKey::new(small_params(), BitMatrix::zeros(2, 2)).is_ok());
    }
}
