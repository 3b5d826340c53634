//! Benchmark harness and analytic cost models.

mod bench;
mod counters;
pub use counters::OpCounters;
mod dfr;
mod models;
pub use bench::{
    bench_run, read_json, table1_check, write_csv, write_json, BenchConfig, CostReport, RatioCheck,
    Spread, Table1Check, CSV_HEADER, TABLE1_TOLERANCE,
};
pub use dfr::{dfr_montecarlo, DfrEstimate};
pub use models::{energy, memory_model_dec, memory_model_enc, EnergyModel};
