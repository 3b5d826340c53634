//! Builds a polar code for a binary erasure channel and shows the
//! reliability ordering, the rate-limit window and systematic encoding.
//!
//! Run with: cargo run --example polar_construction

use pkcpc::gf2::BitVector;
use pkcpc::polar::{max_rate_r0, ChannelSpec, PolarCode};

fn main() -> pkcpc::Result<()> {
    let channel = ChannelSpec::bec(0.5)?;

    // The n = 4 construction is small enough to print in full.
    let code = PolarCode::build(&channel, 4, 2, None)?;
    println!("n = 4, epsilon = 0.5");
    println!("  Bhattacharyya parameters: {:?}", code.z_linear());
    println!(
        "  reliability order (most reliable first): {:?}",
        code.reliability_order()
    );
    println!(
        "  information set: {:?}, frozen set: {:?}",
        code.info_set(),
        code.frozen_set()
    );
    println!("  union bound on block error: {}", code.dfr_bound().clamped);

    // Rate-limit windows for a few lengths and channels.
    println!("\nrate-limit windows k0 = floor(n * R0):");
    for eps in [0.1, 0.5] {
        let ch = ChannelSpec::bec(eps)?;
        for n in [256, 512, 1024] {
            let r = max_rate_r0(&ch, n);
            println!(
                "  epsilon = {eps}, n = {n:4}: R0 = {:.4}, k0 = {}",
                r.rate, r.k0
            );
        }
    }

    // Encode an information word with a zero frozen part.
    let code = PolarCode::build(&channel, 16, 6, None)?;
    let u = BitVector::from_bits(&[1, 0, 1, 1, 0, 1]);
    let x = code.encode(&u, &BitVector::zeros(10))?;
    println!("\nn = 16, k = 6, info set {:?}", code.info_set());
    println!("  u = {u:?}\n  x = {x:?}");
    let h = code.generator_slices().parity_check_t;
    println!("  x * H^T is zero: {}", h.vec_mul(&x)?.is_zero());
    Ok(())
}
