//! The n = 4 worked example: secret information set {2, 4} (1-based),
//! public key Q = I_2, and one encryption and decryption by hand.
//!
//! Run with: cargo run --example known_answer

use pkcpc::gf2::BitVector;
use pkcpc::pkc::{decrypt, encrypt_with_error, keygen_trace, Ciphertext, KeygenOptions, Params};

fn main() -> pkcpc::Result<()> {
    let params = Params::new(4, 2, 1, 0.5)?;
    let options = KeygenOptions {
        info_set: Some(vec![1, 3]),
        ..Default::default()
    };
    let trace = keygen_trace(&params, &[0; 32], &options)?;
    println!("S  = {:?}", trace.secret.s().to_rows());
    println!("G' = {:?}", trace.encryption_matrix.to_rows());
    println!("Q  = {:?}", trace.public.q().to_rows());

    let m = BitVector::from_bits(&[1, 0]);
    let e = BitVector::from_bits(&[0, 0, 1, 0]);
    let c = encrypt_with_error(&m, &trace.public, &e)?;
    println!("encrypt(m = {m:?}, e = {e:?}) = {:?}", c.payload);

    let clean = Ciphertext {
        n: 4,
        t: 1,
        payload: BitVector::from_bits(&[1, 0, 1, 0]),
    };
    println!(
        "decrypt({:?}) = {:?}",
        clean.payload,
        decrypt(&clean, &trace.secret)?
    );
    Ok(())
}
