//! Corrects hard-decision errors and fills erasures with the min-sum
//! successive-cancellation decoder.
//!
//! Run with: cargo run --example sc_decoding

use pkcpc::gf2::BitVector;
use pkcpc::pkc::{drbg::sample_without_replacement, CtrDrbg};
use pkcpc::polar::{ChannelSpec, PolarCode};
use pkcpc::scdec::{DecodeOrder, LlrVector, ScDecoder};

fn main() -> pkcpc::Result<()> {
    let n = 256;
    let code = PolarCode::build(&ChannelSpec::bec(0.5)?, n, 64, None)?;
    let frozen = BitVector::zeros(n - 64);
    let u = BitVector::from_bools((0..64).map(|i| (i * 7) % 5 < 2));
    let x = code.encode(&u, &frozen)?;
    let mut rng = CtrDrbg::new(&[3; 32]);
    let positions: Vec<usize> = (0..n).collect();

    // Hard decisions with t flipped bits.
    let t = 8;
    let mut y = x.clone();
    for p in sample_without_replacement(&mut rng, &positions, t) {
        y.flip(p);
    }
    let llr = LlrVector::from_hard(&y, t)?;
    let mut decoder = ScDecoder::new(n)?;
    let r = decoder.decode(&llr, code.info_set(), &frozen)?;
    println!("{t} bit flips:");
    println!(
        "  information bits recovered: {}",
        r.info_bits(code.info_set())? == u
    );
    println!("  residual weight |x_hat + y| = {}", r.residual_weight);
    println!("  f/g evaluations: {} (n log2 n = {})", r.fg_evals, n * 8);

    // Erasures carry no information (LLR 0).
    let erased: Vec<bool> = (0..n).map(|i| i % 4 == 1).collect();
    let llr = LlrVector::from_erasures(&x, &erased)?;
    let r = decoder.decode(&llr, code.info_set(), &frozen)?;
    println!("\n64 erasures: recovered = {}", r.x_hat == x);

    // Natural-order scheduling is available for comparison.
    let mut natural = ScDecoder::with_order(n, DecodeOrder::Natural)?;
    let r = natural.decode(&LlrVector::from_hard(&x, t)?, code.info_set(), &frozen)?;
    println!(
        "natural order, noiseless input: recovered = {}",
        r.x_hat == x
    );
    Ok(())
}
