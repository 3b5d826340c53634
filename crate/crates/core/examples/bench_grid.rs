//! Benchmarks the rate-3/4 preset grid, prints the CSV report and checks
//! operation-count growth across the doublings.
//!
//! Run with: cargo run --release --example bench_grid

use pkcpc::perf::{bench_run, table1_check, write_csv, BenchConfig};
use pkcpc::pkc::Preset;

fn main() -> pkcpc::Result<()> {
    let config = BenchConfig {
        parallel: true,
        ..BenchConfig::new(25, [0; 32])
    };
    let reports = bench_run(&Preset::Rate075.grid(), &config)?;
    write_csv(&reports, std::io::stdout().lock())?;

    let check = table1_check(&reports)?;
    for c in check.encryption.iter().chain(&check.decryption) {
        println!(
            "{:?} -> {:?}: observed {:.3}, predicted {:.3}, pass = {}",
            c.from, c.to, c.observed, c.predicted, c.passed
        );
    }
    Ok(())
}
