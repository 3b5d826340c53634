//! Simulates SC decoding over erasure channels and compares the block
//! error rate with the union bound over the information set.
//!
//! Run with: cargo run --release --example dfr_montecarlo

use pkcpc::perf::dfr_montecarlo;
use pkcpc::polar::{ChannelSpec, PolarCode};

fn main() -> pkcpc::Result<()> {
    println!("   n    k  eps    failures/trials   empirical      bound   within");
    for (n, k, eps) in [
        (64, 16, 0.2),
        (64, 16, 0.3),
        (64, 16, 0.5),
        (256, 64, 0.5),
        (1024, 256, 0.5),
    ] {
        let channel = ChannelSpec::bec(eps)?;
        let code = PolarCode::build(&channel, n, k, None)?;
        let est = dfr_montecarlo(&code, &channel, 10_000, &[5; 32])?;
        println!(
            "{n:4} {k:4}  {eps:.1}  {:6}/{:<6}       {:.2e}   {:.2e}   {}",
            est.failures, est.trials, est.empirical, est.bound, est.within_bound
        );
    }
    Ok(())
}
