//! Public-key encryption built on polar codes.
//!
//! A key pair is derived from a binary erasure channel design: the code
//! length `n = 2^m` is polarized, a secret information set of size `k` is
//! sampled from the most reliable bit-channels, and the public key is the
//! systematic part `Q` of the scrambled generator. Ciphertexts carry a
//! weight-`t` error vector that only the holder of the information set can
//! strip with successive-cancellation decoding.
//!
//! Modules:
//! - [`gf2`]: packed GF(2) vectors, matrices, Kronecker powers, permutations;
//! - [`polar`]: Bhattacharyya construction, reliability order, rate limit, encoder;
//! - [`scdec`]: min-sum successive-cancellation decoder;
//! - [`pkc`]: DRBG, key generation, encryption and decryption;
//! - [`perf`]: operation counters, cost models, benchmark and error-rate harnesses;
//! - [`cli`]: the `pkcpc` command line and file formats.
//!
//! ```
//! use pkcpc::gf2::BitVector;
//! use pkcpc::pkc::{decrypt, encrypt, keygen, CtrDrbg, Params};
//!
//! let params = Params::new(256, 64, 8, 0.5)?;
//! let (pk, sk) = keygen(&params, &[42; 32])?;
//! let m = BitVector::from_bools((0..64).map(|i| i % 3 == 0));
//! let c = encrypt(&m, &pk, &mut CtrDrbg::new(&[1; 32]))?;
//! assert_eq!(decrypt(&c, &sk)?, m);
//! # Ok::<(), pkcpc::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod gf2;
pub mod perf;
pub mod pkc;
pub mod polar;
pub mod scdec;

pub use error::{Error, Result};
