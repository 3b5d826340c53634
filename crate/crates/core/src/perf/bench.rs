use std::io::{Read, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::counters::OpCounters;
use super::models::{memory_model_dec, memory_model_enc, EnergyModel};
use crate::error::{param, Error, Result};
use crate::pkc::{
    decrypt_counted, derive_seed, encrypt_counted, keygen_with, random_message, sample_error,
    CtrDrbg, GridPoint, KeygenOptions, SEED_LEN,
};
use crate::scdec::ScDecoder;

/// CSV column order shared by [`write_csv`] and external tooling.
pub const CSV_HEADER: [&str; 15] = [
    "n",
    "k",
    "t",
    "epsilon",
    "keygen_s",
    "enc_s",
    "dec_s",
    "enc_xor_bits",
    "dec_fg_evals",
    "mem_enc_cells",
    "mem_dec_cells",
    "energy_enc_j",
    "energy_dec_j",
    "dfr",
    "trials",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    /// Key generations and encrypt/decrypt cycles per grid point (≥ 3).
    pub trials: usize,
    pub seed: [u8; SEED_LEN],
    pub energy: EnergyModel,
    /// Run grid points on separate threads. Timings inside one point stay
    /// sequential.
    pub parallel: bool,
}

impl BenchConfig {
    pub fn new(trials: usize, seed: [u8; SEED_LEN]) -> Self {
        Self {
            trials,
            seed,
            energy: EnergyModel::default(),
            parallel: false,
        }
    }
}

/// Minimum and maximum of a phase's per-trial wall times.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub min_s: f64,
    pub max_s: f64,
}

/// Measurements for one grid point. The first fifteen fields are the CSV
/// columns; times are per-operation medians, counters are totals over all
/// `trials` cycles, and `dfr` counts detected failures plus wrong messages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub epsilon: f64,
    pub keygen_s: Option<f64>,
    pub enc_s: Option<f64>,
    pub dec_s: Option<f64>,
    pub enc_xor_bits: Option<u64>,
    pub dec_fg_evals: Option<u64>,
    pub mem_enc_cells: u64,
    pub mem_dec_cells: u64,
    pub energy_enc_j: Option<f64>,
    pub energy_dec_j: Option<f64>,
    pub dfr: Option<f64>,
    pub trials: usize,

    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub keygen_spread: Option<Spread>,
    #[serde(default)]
    pub enc_spread: Option<Spread>,
    #[serde(default)]
    pub dec_spread: Option<Spread>,
    #[serde(default)]
    pub enc_counters: Option<OpCounters>,
    #[serde(default)]
    pub dec_counters: Option<OpCounters>,
    #[serde(default)]
    pub dec_failures: Option<usize>,
    #[serde(default)]
    pub wrong_messages: Option<usize>,
    pub energy_model: EnergyModel,
    /// Why the point could not be measured (e.g. infeasible key generation).
    #[serde(default)]
    pub error: Option<String>,
    /// Externally supplied CPU utilisation; never measured here.
    #[serde(default)]
    pub cpu_utilization: Option<f64>,
}

impl CostReport {
    fn unmeasured(point: &GridPoint, config: &BenchConfig, error: String) -> Self {
        let p = &point.params;
        let (n, k, t) = (p.n as u64, p.k as u64, p.t as u64);
        Self {
            n: p.n,
            k: p.k,
            t: p.t,
            epsilon: p.epsilon,
            keygen_s: None,
            enc_s: None,
            dec_s: None,
            enc_xor_bits: None,
            dec_fg_evals: None,
            mem_enc_cells: memory_model_enc(n, k, t),
            mem_dec_cells: memory_model_dec(n, k, t),
            energy_enc_j: None,
            energy_dec_j: None,
            dfr: None,
            trials: config.trials,
            label: p.label.clone(),
            window: point.window,
            keygen_spread: None,
            enc_spread: None,
            dec_spread: None,
            enc_counters: None,
            dec_counters: None,
            dec_failures: None,
            wrong_messages: None,
            energy_model: config.energy,
            error: Some(error),
            cpu_utilization: None,
        }
    }

    pub fn is_measured(&self) -> bool {
        self.error.is_none()
    }
}

fn median_spread(times: &mut [f64]) -> (f64, Spread) {
    times.sort_by(f64::total_cmp);
    let len = times.len();
    let median = if len % 2 == 1 {
        times[len / 2]
    } else {
        0.5 * (times[len / 2 - 1] + times[len / 2])
    };
    (
        median,
        Spread {
            min_s: times[0],
            max_s: times[len - 1],
        },
    )
}

/// Per-point seed. The index goes into the key half of the seed material:
/// seeds that differ only in the counter half give shifted copies of one
/// stream.
fn point_seed(seed: &[u8; SEED_LEN], index: usize) -> [u8; SEED_LEN] {
    let mut s = *seed;
    for (b, x) in s[..8].iter_mut().zip((index as u64).to_le_bytes()) {
        *b ^= x;
    }
    s
}

fn measure_point(point: &GridPoint, config: &BenchConfig, index: usize) -> CostReport {
    match try_measure_point(point, config, index) {
        Ok(r) => r,
        Err(e) => {
            log::warn!(
                "grid point n={} k={} not measured: {e}",
                point.params.n,
                point.params.k
            );
            CostReport::unmeasured(point, config, e.to_string())
        }
    }
}

fn try_measure_point(point: &GridPoint, config: &BenchConfig, index: usize) -> Result<CostReport> {
    let p = &point.params;
    p.validate()?;
    let seed = point_seed(&config.seed, index);
    let key_seed = derive_seed(&seed, 0);
    let options = KeygenOptions {
        window: point.window,
        info_set: None,
    };

    let mut keygen_times = Vec::with_capacity(config.trials);
    let mut keys = None;
    for _ in 0..config.trials {
        let start = Instant::now();
        let pair = keygen_with(p, &key_seed, &options)?;
        keygen_times.push(start.elapsed().as_secs_f64());
        keys = Some(pair);
    }
    let (pk, sk) = keys.expect("trials >= 3");

    let mut rng = CtrDrbg::new(&derive_seed(&seed, 1));
    let mut decoder = ScDecoder::new(p.n)?;
    let mut enc_counters = OpCounters::default();
    let mut dec_counters = OpCounters::default();
    let mut enc_times = Vec::with_capacity(config.trials);
    let mut dec_times = Vec::with_capacity(config.trials);
    let mut failures = 0;
    let mut wrong = 0;
    for _ in 0..config.trials {
        let m = random_message(p.k, &mut rng);
        let e = sample_error(p.n, p.t, &mut rng)?;
        let start = Instant::now();
        let c = encrypt_counted(&m, &pk, &e, &mut enc_counters)?;
        enc_times.push(start.elapsed().as_secs_f64());
        let start = Instant::now();
        let outcome = decrypt_counted(&c, &sk, &mut decoder, &mut dec_counters);
        dec_times.push(start.elapsed().as_secs_f64());
        match outcome {
            Ok(got) if got == m => {}
            Ok(_) => wrong += 1,
            Err(Error::DecryptionFailure { .. }) => failures += 1,
            Err(e) => return Err(e),
        }
    }

    let (keygen_s, keygen_spread) = median_spread(&mut keygen_times);
    let (enc_s, enc_spread) = median_spread(&mut enc_times);
    let (dec_s, dec_spread) = median_spread(&mut dec_times);
    let mut report = CostReport::unmeasured(point, config, String::new());
    report.error = None;
    report.keygen_s = Some(keygen_s);
    report.enc_s = Some(enc_s);
    report.dec_s = Some(dec_s);
    report.keygen_spread = Some(keygen_spread);
    report.enc_spread = Some(enc_spread);
    report.dec_spread = Some(dec_spread);
    report.enc_xor_bits = Some(enc_counters.xor_bits);
    report.dec_fg_evals = Some(dec_counters.fg_evals);
    report.enc_counters = Some(enc_counters);
    report.dec_counters = Some(dec_counters);
    report.energy_enc_j = Some(config.energy.energy(enc_s));
    report.energy_dec_j = Some(config.energy.energy(dec_s));
    report.dec_failures = Some(failures);
    report.wrong_messages = Some(wrong);
    report.dfr = Some((failures + wrong) as f64 / config.trials as f64);
    Ok(report)
}

/// Measures every grid point. Points whose keys cannot be generated come
/// back with `error` set instead of aborting the run. Message and error
/// sequences (and therefore all counters) depend only on the seed and the
/// point's position in the grid.
pub fn bench_run(grid: &[GridPoint], config: &BenchConfig) -> Result<Vec<CostReport>> {
    if config.trials < 5 {
        return param(format!("need at least 5 trials, got {}", config.trials));
    }
    if !config.parallel {
        return Ok(grid
            .iter()
            .enumerate()
            .map(|(i, g)| measure_point(g, config, i))
            .collect());
    }
    Ok(std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .iter()
            .enumerate()
            .map(|(i, g)| scope.spawn(move || measure_point(g, config, i)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("benchmark worker panicked"))
            .collect()
    }))
}

#[derive(Serialize)]
struct CsvRow {
    n: usize,
    k: usize,
    t: usize,
    epsilon: f64,
    keygen_s: Option<f64>,
    enc_s: Option<f64>,
    dec_s: Option<f64>,
    enc_xor_bits: Option<u64>,
    dec_fg_evals: Option<u64>,
    mem_enc_cells: u64,
    mem_dec_cells: u64,
    energy_enc_j: Option<f64>,
    energy_dec_j: Option<f64>,
    dfr: Option<f64>,
    trials: usize,
}

impl From<&CostReport> for CsvRow {
    fn from(r: &CostReport) -> Self {
        Self {
            n: r.n,
            k: r.k,
            t: r.t,
            epsilon: r.epsilon,
            keygen_s: r.keygen_s,
            enc_s: r.enc_s,
            dec_s: r.dec_s,
            enc_xor_bits: r.enc_xor_bits,
            dec_fg_evals: r.dec_fg_evals,
            mem_enc_cells: r.mem_enc_cells,
            mem_dec_cells: r.mem_dec_cells,
            energy_enc_j: r.energy_enc_j,
            energy_dec_j: r.energy_dec_j,
            dfr: r.dfr,
            trials: r.trials,
        }
    }
}

/// One row per report under [`CSV_HEADER`]; unmeasured values are empty.
pub fn write_csv<W: Write>(reports: &[CostReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if reports.is_empty() {
        w.write_record(CSV_HEADER).map_err(io_error)?;
    }
    for r in reports {
        w.serialize(CsvRow::from(r)).map_err(io_error)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ReportFile {
    reports: Vec<CostReport>,
}

/// `{"reports": [...]}` with one object per report.
pub fn write_json<W: Write>(reports: &[CostReport], out: W) -> Result<()> {
    let file = ReportFile {
        reports: reports.to_vec(),
    };
    serde_json::to_writer_pretty(out, &file).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<CostReport>> {
    let file: ReportFile = serde_json::from_reader(input)
        .map_err(|e| Error::Parameter(format!("malformed report file: {e}")))?;
    Ok(file.reports)
}

fn io_error(e: csv::Error) -> Error {
    Error::Io(format!("csv output failed: {e}"))
}

/// Observed versus predicted growth of one counter across one doubling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub observed: f64,
    pub predicted: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Check {
    /// Encryption XORs against `k(n−k)` growth.
    pub encryption: Vec<RatioCheck>,
    /// Decoder f/g evaluations against `n log n` growth.
    pub decryption: Vec<RatioCheck>,
    pub tolerance: f64,
}

impl Table1Check {
    pub fn passed(&self) -> bool {
        self.encryption
            .iter()
            .chain(&self.decryption)
            .all(|c| c.passed)
    }
}

/// Relative tolerance on each doubling ratio.
pub const TABLE1_TOLERANCE: f64 = 0.25;

/// Pairs measured reports whose length doubles at the same rate and checks
/// per-cycle counter growth against the asymptotic cost of encryption
/// (`k(n−k)`) and decoding (`n log n`).
pub fn table1_check(reports: &[CostReport]) -> Result<Table1Check> {
    let measured: Vec<&CostReport> = reports
        .iter()
        .filter(|r| r.is_measured() && r.enc_xor_bits.is_some() && r.dec_fg_evals.is_some())
        .collect();
    let mut encryption = Vec::new();
    let mut decryption = Vec::new();
    let check =
        |observed: f64, predicted: f64| (observed / predicted - 1.0).abs() <= TABLE1_TOLERANCE;
    for a in &measured {
        for b in &measured {
            if b.n != 2 * a.n || b.k * a.n != a.k * b.n {
                continue;
            }
            let per = |r: &CostReport, v: u64| v as f64 / r.trials as f64;
            let enc_obs = per(b, b.enc_xor_bits.unwrap_or(0)) / per(a, a.enc_xor_bits.unwrap_or(0));
            let enc_pred = (b.k * (b.n - b.k)) as f64 / (a.k * (a.n - a.k)) as f64;
            let dec_obs = per(b, b.dec_fg_evals.unwrap_or(0)) / per(a, a.dec_fg_evals.unwrap_or(0));
            let nlogn = |n: usize| n as f64 * (n as f64).log2();
            let dec_pred = nlogn(b.n) / nlogn(a.n);
            encryption.push(RatioCheck {
                from: (a.n, a.k),
                to: (b.n, b.k),
                observed: enc_obs,
                predicted: enc_pred,
                passed: check(enc_obs, enc_pred),
            });
            decryption.push(RatioCheck {
                from: (a.n, a.k),
                to: (b.n, b.k),
                observed: dec_obs,
                predicted: dec_pred,
                passed: check(dec_obs, dec_pred),
            });
        }
    }
    if encryption.is_empty() {
        return param("the reports contain no fixed-rate doubling pair");
    }
    Ok(Table1Check {
        encryption,
        decryption,
        tolerance: TABLE1_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pkc::{Params, Preset};

    fn small_grid() -> Vec<GridPoint> {
        [(64, 16, 2), (128, 32, 3)]
            .iter()
            .map(|&(n, k, t)| GridPoint::with_fallback_window(Params::new(n, k, t, 0.5).unwrap()))
            .collect()
    }

    #[test]
    fn rejects_too_few_trials() {
        assert!(bench_run(&small_grid(), &BenchConfig::new(4, [0; 32])).is_err());
    }

    #[test]
    fn reports_are_populated_and_deterministic() {
        let config = BenchConfig::new(5, [4; 32]);
        let a = bench_run(&small_grid(), &config).unwrap();
        let b = bench_run(
            &small_grid(),
            &BenchConfig {
                parallel: true,
                ..config
            },
        )
        .unwrap();
        assert_eq!(a.len(), 2);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.is_measured());
            assert_eq!(x.enc_counters, y.enc_counters);
            assert_eq!(x.dec_counters, y.dec_counters);
            assert_eq!(
                x.dec_fg_evals,
                Some(5 * (x.n as u64) * (x.n.trailing_zeros() as u64))
            );
            let e = x.energy_model.energy(x.enc_s.unwrap());
            assert_eq!(x.energy_enc_j, Some(e));
            let s = x.enc_spread.unwrap();
            assert!(s.min_s <= x.enc_s.unwrap() && x.enc_s.unwrap() <= s.max_s);
        }
    }

    #[test]
    fn infeasible_point_is_marked() {
        let mut grid = small_grid();
        // k far above the rate-limit window with no override
        grid.push(GridPoint {
            params: Params {
                n: 64,
                k: 60,
                t: 1,
                epsilon: 0.5,
                label: None,
            },
            window: None,
        });
        let r = bench_run(&grid, &BenchConfig::new(5, [0; 32])).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r[2].error.is_some());
        assert_eq!(r[2].enc_s, None);
        assert!(r[0].is_measured());
    }

    #[test]
    fn csv_and_json_shapes() {
        let r = bench_run(&small_grid(), &BenchConfig::new(5, [1; 32])).unwrap();
        let mut buf = Vec::new();
        write_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.count(), 2);

        let mut json = Vec::new();
        write_json(&r, &mut json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v["reports"].as_array().unwrap().len(), 2);
        for col in CSV_HEADER {
            assert!(v["reports"][0].get(col).is_some(), "missing {col}");
        }
        assert_eq!(read_json(json.as_slice()).unwrap(), r);

        let mut empty = Vec::new();
        write_csv(&[], &mut empty).unwrap();
        assert_eq!(
            String::from_utf8(empty).unwrap().trim(),
            CSV_HEADER.join(",")
        );
    }

    #[test]
    fn table1_on_small_doubling() {
        let r = bench_run(&small_grid(), &BenchConfig::new(20, [2; 32])).unwrap();
        let check = table1_check(&r).unwrap();
        assert_eq!(check.encryption.len(), 1);
        assert!((check.encryption[0].predicted - 4.0).abs() < 1e-12);
        assert!((check.decryption[0].predicted - (128.0 * 7.0) / (64.0 * 6.0)).abs() < 1e-12);
        assert!(check.decryption[0].passed);
        assert!(table1_check(&r[..1]).is_err());
    }

    #[test]
    fn preset_grid_has_three_rows() {
        let r = bench_run(&Preset::Rate075.grid()[..1], &BenchConfig::new(5, [0; 32])).unwrap();
        assert!(r[0].is_measured(), "{:?}", r[0].error);
    }
}
