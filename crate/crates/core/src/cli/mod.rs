//! The `pkcpc` command-line tool.
//!
//! Subcommands: `keygen`, `encrypt`, `decrypt`, `bench`, `dfr` and `analyze`.
//! [`run`] parses arguments, dispatches, and returns the process exit status;
//! see [`ExitStatus`] for the codes.
//!
//! Messages are framed as a 32-bit little-endian byte count followed by the
//! bytes, zero-padded to a whole number of k-bit blocks. Each block is
//! encrypted independently with a fresh error vector. This mode is not
//! semantically secure.

pub mod format;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::gf2::BitVector;
use crate::perf::{self, BenchConfig, EnergyModel};
use crate::pkc::{
    decrypt, encrypt, keygen_with, CtrDrbg, GridPoint, KeygenOptions, Params, Preset, SEED_LEN,
};
use crate::polar::{ChannelSpec, PolarCode};
use format::FormatError;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitStatus {
    Success = 0,
    /// Unknown flag, missing argument or malformed option value.
    Usage = 2,
    /// A file could not be read or written.
    Io = 3,
    /// A key, ciphertext or report file failed to parse.
    Format = 4,
    /// SC decoding could not strip the error from some block.
    DecryptionFailure = 5,
    /// Parameters are invalid or inconsistent with each other.
    Parameter = 6,
    /// The decrypted message framing is inconsistent (e.g. wrong key).
    Framing = 7,
    /// `analyze --table1-check` found a ratio outside tolerance.
    CheckFailed = 8,
    Internal = 70,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source} (format error {code})", code = source.code())]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Library(#[from] crate::Error),
    #[error("message framing is corrupt: {0}")]
    Framing(String),
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            Self::Usage(_) => ExitStatus::Usage,
            Self::Io { .. } => ExitStatus::Io,
            Self::Format { .. } => ExitStatus::Format,
            Self::Library(crate::Error::DecryptionFailure { .. }) => ExitStatus::DecryptionFailure,
            Self::Library(crate::Error::Parameter(_) | crate::Error::Structure(_)) => {
                ExitStatus::Parameter
            }
            Self::Library(crate::Error::Io(_)) => ExitStatus::Io,
            Self::Library(crate::Error::Internal(_)) => ExitStatus::Internal,
            Self::Framing(_) => ExitStatus::Framing,
            Self::CheckFailed(_) => ExitStatus::CheckFailed,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "pkcpc", version, about = "Polar-code public-key encryption")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Encrypt a file under a public key.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext file with a secret key.
    Decrypt(DecryptArgs),
    /// Time key generation, encryption and decryption over a parameter grid.
    Bench(BenchArgs),
    /// Monte Carlo SC block error rate on an erasure channel against its bound.
    Dfr(DfrArgs),
    /// Inspect a JSON benchmark report.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = crate::pkc::DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// 64 hex characters; drawn from the OS when omitted.
    #[arg(long)]
    pub seed_hex: Option<String>,
    /// Sample the secret set from this many most reliable channels instead
    /// of the rate-limit window.
    #[arg(long)]
    pub window_override: Option<usize>,
    #[arg(long)]
    pub pub_out: PathBuf,
    #[arg(long)]
    pub sec_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EncryptArgs {
    #[arg(long = "pub")]
    pub public: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// 64 hex characters seeding the error vectors; drawn from the OS when omitted.
    #[arg(long)]
    pub rng_seed_hex: Option<String>,
}

#[derive(Debug, Args)]
pub struct DecryptArgs {
    #[arg(long = "sec")]
    pub secret: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Named grid: comparison or rate075.
    #[arg(
        long,
        conflicts_with = "grid_file",
        required_unless_present = "grid_file"
    )]
    pub preset: Option<String>,
    /// JSON array of grid points `{"n","k","t","epsilon","window"?}`.
    #[arg(long)]
    pub grid_file: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
    #[arg(long)]
    pub seed_hex: Option<String>,
    #[arg(long, default_value_t = 0.7)]
    pub current_amps: f64,
    #[arg(long, default_value_t = 1.5)]
    pub voltage: f64,
    /// Measure grid points on parallel threads.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct DfrArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = crate::pkc::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long)]
    pub seed_hex: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// JSON report written by `bench --json-out`.
    #[arg(long)]
    pub reports: PathBuf,
    /// Check counter growth against the asymptotic cost table.
    #[arg(long)]
    pub table1_check: bool,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit status as an integer.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitStatus::Usage as i32
            } else {
                ExitStatus::Success as i32
            };
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitStatus::Success as i32,
        Err(e) => {
            eprintln!("error: {e}");
            e.status() as i32
        }
    }
}

pub fn execute(command: &Command) -> CliResult<()> {
    match command {
        Command::Keygen(a) => cmd_keygen(a),
        Command::Encrypt(a) => cmd_encrypt(a),
        Command::Decrypt(a) => cmd_decrypt(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Dfr(a) => cmd_dfr(a),
        Command::Analyze(a) => cmd_analyze(a),
    }
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn format_error(path: &Path) -> impl FnOnce(FormatError) -> CliError + '_ {
    move |source| CliError::Format {
        path: path.to_owned(),
        source,
    }
}

/// Parses 64 hex characters, or draws a fresh seed from the OS.
pub fn parse_seed(hex_seed: Option<&str>) -> CliResult<[u8; SEED_LEN]> {
    let mut seed = [0u8; SEED_LEN];
    match hex_seed {
        Some(s) => hex::decode_to_slice(s.trim(), &mut seed).map_err(|e| {
            CliError::Usage(format!("seed must be {} hex characters: {e}", 2 * SEED_LEN))
        })?,
        None => getrandom::getrandom(&mut seed).map_err(|e| {
            CliError::Library(crate::Error::Internal(format!(
                "OS entropy unavailable: {e}"
            )))
        })?,
    }
    Ok(seed)
}

fn cmd_keygen(a: &KeygenArgs) -> CliResult<()> {
    let params = Params::new(a.n, a.k, a.t, a.epsilon)?;
    let seed = parse_seed(a.seed_hex.as_deref())?;
    let options = KeygenOptions {
        window: a.window_override,
        info_set: None,
    };
    let (pk, sk) = keygen_with(&params, &seed, &options)?;
    write_file(&a.pub_out, &format::serialize_public_key(&pk))?;
    write_file(&a.sec_out, &format::serialize_secret_key(&sk))?;
    log::info!("wrote key pair for n={} k={} t={}", a.n, a.k, a.t);
    Ok(())
}

/// Splits `data` into k-bit blocks after a 32-bit little-endian length prefix.
pub fn frame_message(data: &[u8], k: usize) -> CliResult<Vec<BitVector>> {
    let len = u32::try_from(data.len())
        .map_err(|_| CliError::Usage("message longer than 4 GiB".into()))?;
    let mut bytes = len.to_le_bytes().to_vec();
    bytes.extend_from_slice(data);
    let bits = BitVector::from_bytes(8 * bytes.len(), &bytes)?;
    let blocks = bits.len().div_ceil(k);
    Ok((0..blocks)
        .map(|b| BitVector::from_bools((b * k..(b + 1) * k).map(|i| i < bits.len() && bits.get(i))))
        .collect())
}

/// Inverse of [`frame_message`]; rejects an impossible length or non-zero
/// padding, which is what a wrong key typically produces.
pub fn unframe_message(blocks: &[BitVector]) -> CliResult<Vec<u8>> {
    let bits: Vec<bool> = blocks.iter().flat_map(|b| b.iter()).collect();
    if bits.len() < 32 {
        return Err(CliError::Framing("fewer than 32 bits decrypted".into()));
    }
    let byte = |i: usize| (0..8).fold(0u8, |acc, j| acc | (u8::from(bits[8 * i + j]) << j));
    let len = u32::from_le_bytes([byte(0), byte(1), byte(2), byte(3)]) as usize;
    let used = 32 + 8 * len;
    if used > bits.len() {
        return Err(CliError::Framing(format!(
            "declared length {len} exceeds the {} decrypted bytes",
            bits.len() / 8 - 4
        )));
    }
    if bits[used..].iter().any(|&b| b) {
        return Err(CliError::Framing("padding bits are not zero".into()));
    }
    if bits.len() - used >= blocks.first().map_or(0, |b| b.len()) {
        return Err(CliError::Framing(
            "more blocks than the declared length needs".into(),
        ));
    }
    Ok((4..4 + len).map(byte).collect())
}

fn cmd_encrypt(a: &EncryptArgs) -> CliResult<()> {
    let pk =
        format::deserialize_public_key(&read_file(&a.public)?).map_err(format_error(&a.public))?;
    let data = read_file(&a.input)?;
    let mut rng = CtrDrbg::new(&parse_seed(a.rng_seed_hex.as_deref())?);
    let p = pk.params();
    let blocks = frame_message(&data, p.k)?
        .iter()
        .map(|m| encrypt(m, &pk, &mut rng).map(|c| c.payload))
        .collect::<crate::Result<Vec<_>>>()?;
    write_file(&a.out, &format::serialize_ciphertexts(p, &blocks))?;
    log::info!(
        "encrypted {} bytes into {} blocks",
        data.len(),
        blocks.len()
    );
    Ok(())
}

fn cmd_decrypt(a: &DecryptArgs) -> CliResult<()> {
    let sk =
        format::deserialize_secret_key(&read_file(&a.secret)?).map_err(format_error(&a.secret))?;
    let (params, blocks) =
        format::deserialize_ciphertexts(&read_file(&a.input)?).map_err(format_error(&a.input))?;
    let p = sk.params();
    if (params.n, params.k, params.t) != (p.n, p.k, p.t)
        || params.epsilon.to_bits() != p.epsilon.to_bits()
    {
        return Err(crate::Error::Parameter(format!(
            "ciphertext is for n={} k={} t={} epsilon={}, key is for n={} k={} t={} epsilon={}",
            params.n, params.k, params.t, params.epsilon, p.n, p.k, p.t, p.epsilon
        ))
        .into());
    }
    let messages = blocks
        .into_iter()
        .map(|payload| {
            let c = crate::pkc::Ciphertext {
                n: p.n,
                t: p.t,
                payload,
            };
            decrypt(&c, &sk)
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let data = unframe_message(&messages)?;
    write_file(&a.out, &data)
}

fn load_grid(a: &BenchArgs) -> CliResult<Vec<GridPoint>> {
    if let Some(name) = &a.preset {
        let preset = Preset::parse(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown preset {name:?}; use comparison or rate075"
            ))
        })?;
        return Ok(preset.grid());
    }
    let path = a
        .grid_file
        .as_ref()
        .expect("clap requires preset or grid file");
    let grid: Vec<GridPoint> = serde_json::from_slice(&read_file(path)?)
        .map_err(|e| CliError::Usage(format!("{}: malformed grid file: {e}", path.display())))?;
    Ok(grid)
}

fn cmd_bench(a: &BenchArgs) -> CliResult<()> {
    let grid = load_grid(a)?;
    let seed = parse_seed(a.seed_hex.as_deref())?;
    if a.seed_hex.is_none() {
        eprintln!("seed: {}", hex::encode(seed));
    }
    let config = BenchConfig {
        trials: a.trials,
        seed,
        energy: EnergyModel::new(a.current_amps, a.voltage)?,
        parallel: a.parallel,
    };
    let reports = perf::bench_run(&grid, &config)?;
    let mut wrote = false;
    if let Some(path) = &a.csv_out {
        let file = fs::File::create(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        perf::write_csv(&reports, file)?;
        wrote = true;
    }
    if let Some(path) = &a.json_out {
        let file = fs::File::create(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        perf::write_json(&reports, file)?;
        wrote = true;
    }
    if !wrote {
        perf::write_csv(&reports, std::io::stdout().lock())?;
    }
    Ok(())
}

fn cmd_dfr(a: &DfrArgs) -> CliResult<()> {
    let seed = parse_seed(a.seed_hex.as_deref())?;
    if a.seed_hex.is_none() {
        eprintln!("seed: {}", hex::encode(seed));
    }
    let channel = ChannelSpec::bec(a.epsilon)?;
    let code = PolarCode::build(&channel, a.n, a.k, None)?;
    let est = perf::dfr_montecarlo(&code, &channel, a.trials, &seed)?;
    let json =
        serde_json::to_string_pretty(&est).map_err(|e| crate::Error::Internal(e.to_string()))?;
    println!("{json}");
    Ok(())
}

fn cmd_analyze(a: &AnalyzeArgs) -> CliResult<()> {
    let reports = perf::read_json(read_file(&a.reports)?.as_slice())?;
    for r in &reports {
        match &r.error {
            Some(e) => println!("n={} k={} t={}: not measured ({e})", r.n, r.k, r.t),
            None => println!(
                "n={} k={} t={}: keygen {:.6} s, enc {:.6} s, dec {:.6} s, dfr {}",
                r.n,
                r.k,
                r.t,
                r.keygen_s.unwrap_or(f64::NAN),
                r.enc_s.unwrap_or(f64::NAN),
                r.dec_s.unwrap_or(f64::NAN),
                r.dfr.unwrap_or(f64::NAN)
            ),
        }
    }
    if !a.table1_check {
        return Ok(());
    }
    let check = perf::table1_check(&reports)?;
    for (label, rows) in [
        ("encryption k(n-k)", &check.encryption),
        ("decryption n log n", &check.decryption),
    ] {
        for c in rows.iter() {
            println!(
                "{label}: ({},{}) -> ({},{}): observed {:.3}, predicted {:.3}: {}",
                c.from.0,
                c.from.1,
                c.to.0,
                c.to.1,
                c.observed,
                c.predicted,
                if c.passed { "pass" } else { "FAIL" }
            );
        }
    }
    if check.passed() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!(
            "a doubling ratio is outside ±{:.0}%",
            100.0 * check.tolerance
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn framing_roundtrip() {
        for k in [1, 2, 7, 8, 13, 768] {
            for data in [&b""[..], b"a", b"hello world"] {
                let blocks = frame_message(data, k).unwrap();
                assert!(blocks.iter().all(|b| b.len() == k));
                assert_eq!(blocks.len(), (32 + 8 * data.len()).div_ceil(k));
                assert_eq!(unframe_message(&blocks).unwrap(), data);
            }
        }
    }

    #[test]
    fn framing_rejects_garbage() {
        let mut blocks = frame_message(b"abc", 16).unwrap();
        blocks[0].set(10, true); // declared length becomes huge
        assert!(matches!(
            unframe_message(&blocks),
            Err(CliError::Framing(_))
        ));
        let mut blocks = frame_message(b"abc", 64).unwrap();
        blocks[0].set(63, true);
        assert!(matches!(
            unframe_message(&blocks),
            Err(CliError::Framing(_))
        ));
        let mut blocks = frame_message(b"abc", 16).unwrap();
        blocks.push(BitVector::zeros(16));
        assert!(matches!(
            unframe_message(&blocks),
            Err(CliError::Framing(_))
        ));
        assert!(unframe_message(&[]).is_err());
    }

    #[test]
    fn seeds() {
        let s = parse_seed(Some(&"ab".repeat(32))).unwrap();
        assert_eq!(s, [0xab; 32]);
        assert!(parse_seed(Some("abc")).is_err());
        assert_ne!(parse_seed(None).unwrap(), parse_seed(None).unwrap());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["pkcpc", "frobnicate"]), ExitStatus::Usage as i32);
        assert_eq!(
            run(["pkcpc", "keygen", "--n", "4"]),
            ExitStatus::Usage as i32
        );
        assert_eq!(run(["pkcpc", "--help"]), 0);
        assert_eq!(
            run([
                "pkcpc",
                "dfr",
                "--n",
                "64",
                "--k",
                "16",
                "--trials",
                "5",
                "--seed-hex",
                &"00".repeat(32)
            ]),
            ExitStatus::Parameter as i32
        );
    }
}
