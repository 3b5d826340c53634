//! Writes a key pair and a ciphertext to disk in the binary formats used
//! by the command-line tool, then reloads them and decrypts.
//!
//! Run with: cargo run --example key_files

use pkcpc::cli::format;
use pkcpc::cli::{frame_message, unframe_message};
use pkcpc::pkc::{decrypt, encrypt, keygen, Ciphertext, CtrDrbg, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("pkcpc-key-files-example");
    std::fs::create_dir_all(&dir)?;

    let params = Params::new(256, 64, 8, 0.5)?;
    let (pk, sk) = keygen(&params, &[21; 32])?;
    std::fs::write(dir.join("key.pub"), format::serialize_public_key(&pk))?;
    std::fs::write(dir.join("key.sec"), format::serialize_secret_key(&sk))?;

    let message = b"polar codes hide the information set";
    let mut rng = CtrDrbg::new(&[22; 32]);
    let blocks = frame_message(message, params.k)?
        .iter()
        .map(|m| encrypt(m, &pk, &mut rng).map(|c| c.payload))
        .collect::<pkcpc::Result<Vec<_>>>()?;
    std::fs::write(
        dir.join("msg.ct"),
        format::serialize_ciphertexts(&params, &blocks),
    )?;
    for name in ["key.pub", "key.sec", "msg.ct"] {
        println!("{name}: {} bytes", std::fs::metadata(dir.join(name))?.len());
    }

    let sk2 = format::deserialize_secret_key(&std::fs::read(dir.join("key.sec"))?)?;
    let (p2, blocks) = format::deserialize_ciphertexts(&std::fs::read(dir.join("msg.ct"))?)?;
    let plain = blocks
        .into_iter()
        .map(|payload| {
            decrypt(
                &Ciphertext {
                    n: p2.n,
                    t: p2.t,
                    payload,
                },
                &sk2,
            )
        })
        .collect::<pkcpc::Result<Vec<_>>>()?;
    let recovered = unframe_message(&plain)?;
    println!("recovered: {:?}", String::from_utf8_lossy(&recovered));

    let mut tampered = std::fs::read(dir.join("key.pub"))?;
    tampered[0] = b'X';
    match format::deserialize_public_key(&tampered) {
        Err(e) => println!("tampered public key rejected: {e} (code {})", e.code()),
        Ok(_) => println!("tampered public key accepted?!"),
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
