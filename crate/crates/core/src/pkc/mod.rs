//! The polar-code public-key cryptosystem.
//!
//! Key generation samples a secret information set from the most reliable
//! bit-channels with a seeded DRBG, then publishes `Q` from the systematic
//! encryption matrix `S⁻¹·G_{A(s)}·P = [I_k | Q]`, where `S` is the square
//! block of `G_n` on the secret set and `P` moves the secret positions to the
//! front. Encryption adds a weight-t error to `m·[I_k | Q]`; decryption undoes
//! `P`, strips the error with SC decoding and unscrambles with `S`.
//!
//! The secret key stores the seed and the information set; `S`, `S⁻¹` and
//! `P` are recomputed from them.

mod cipher;
pub mod drbg;
mod keys;
mod params;
mod tuning;

pub use cipher::{
    decrypt, decrypt_counted, encrypt, encrypt_counted, encrypt_with_error, sample_error,
    Ciphertext,
};
pub use drbg::{drbg_stream, CtrDrbg, SEED_LEN};
pub use keys::{
    keygen, keygen_trace, keygen_with, sample_secret_info_set, KeygenOptions, KeygenTrace,
    PublicKey, SecretKey,
};
pub use params::{GridPoint, Params, Preset, DEFAULT_EPSILON};
pub use tuning::{measure_failure_rate, suggest_error_weight, WeightTrial};

pub(crate) use tuning::{derive_seed, random_message};
