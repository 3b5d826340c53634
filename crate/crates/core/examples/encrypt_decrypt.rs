//! Generates a key from the rate-limit window at n = 256 and runs many
//! random encrypt/decrypt cycles, counting detected failures.
//!
//! Run with: cargo run --release --example encrypt_decrypt

use pkcpc::gf2::BitVector;
use pkcpc::pkc::{decrypt, encrypt, keygen, measure_failure_rate, CtrDrbg, KeygenOptions, Params};

fn main() -> pkcpc::Result<()> {
    let probe = Params::new(256, 1, 8, 0.5)?;
    let k = probe.rate_limit_window();
    let params = Params::new(256, k, 8, 0.5)?;
    println!(
        "n = 256, epsilon = 0.5, k = {k} (rate {:.3}), t = 8",
        k as f64 / 256.0
    );

    let (pk, sk) = keygen(&params, &[11; 32])?;
    let mut rng = CtrDrbg::new(&[12; 32]);
    let m = BitVector::from_bools((0..k).map(|i| i % 2 == 0));
    let c = encrypt(&m, &pk, &mut rng)?;
    println!(
        "single block: ciphertext weight {}, decrypted correctly: {}",
        c.payload.weight(),
        decrypt(&c, &sk)? == m
    );

    for t in [8, 12, 16, 20] {
        let p = Params::new(256, k, t, 0.5)?;
        let r = measure_failure_rate(&p, &KeygenOptions::default(), 1000, &[13; 32])?;
        println!(
            "t = {t:2}: {} detected failures, {} wrong messages in {} trials",
            r.failures, r.wrong_messages, r.trials
        );
    }
    Ok(())
}
