//! Evaluates the closed-form memory models and the energy model.
//!
//! Run with: cargo run --example cost_models

use pkcpc::perf::{energy, memory_model_dec, memory_model_enc, EnergyModel};

fn main() -> pkcpc::Result<()> {
    println!("   n    k    t   enc cells   dec cells");
    for (n, k, t) in [
        (256, 16, 8),
        (512, 8, 16),
        (1024, 4, 32),
        (256, 192, 3),
        (1024, 768, 9),
    ] {
        println!(
            "{n:4} {k:4} {t:4} {:11} {:11}",
            memory_model_enc(n, k, t),
            memory_model_dec(n, k, t)
        );
    }

    let default = EnergyModel::default();
    let five_volt = EnergyModel::new(0.7, 5.0)?;
    for secs in [0.076, 1.24] {
        println!(
            "{secs} s: {:.4} J at 0.7 A / 1.5 V, {:.4} J at 0.7 A / 5 V",
            energy(&default, secs),
            energy(&five_volt, secs)
        );
    }
    Ok(())
}
