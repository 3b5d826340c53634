//! On-disk layouts for keys and ciphertexts.
//!
//! Every file starts with a 26-byte header:
//!
//! | bytes  | field                                   |
//! |--------|-----------------------------------------|
//! | 0..4   | magic `PKPC`                            |
//! | 4      | version (1)                             |
//! | 5      | record type: 1 public, 2 secret, 3 ct   |
//! | 6..10  | n, u32 little-endian                    |
//! | 10..14 | k, u32 little-endian                    |
//! | 14..18 | t, u32 little-endian                    |
//! | 18..26 | ε, IEEE-754 f64 little-endian           |
//!
//! Payloads:
//! - public key: `Q` row-major, each row packed LSB-first into `⌈(n−k)/8⌉` bytes;
//! - secret key: the 32-byte seed, then the `k` information-set indices as
//!   strictly ascending 1-based u32 little-endian;
//! - ciphertext: zero or more blocks of `⌈n/8⌉` bytes, each packed LSB-first.
//!
//! Unused bits in the final byte of a packed row or block must be zero.

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector};
use crate::pkc::{Params, PublicKey, SecretKey, SEED_LEN};

pub const MAGIC: [u8; 4] = *b"PKPC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum RecordType {
    PublicKey = 1,
    SecretKey = 2,
    Ciphertext = 3,
}

impl RecordType {
    fn from_byte(b: u8) -> Option<Self> {
        match b {
            1 => Some(Self::PublicKey),
            2 => Some(Self::SecretKey),
            3 => Some(Self::Ciphertext),
            _ => None,
        }
    }
}

/// Parse failures. Each variant has a distinct [`FormatError::code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("file is truncated: need {needed} bytes, found {found}")]
    Truncated { needed: usize, found: usize },
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown record type {0}")]
    UnknownRecordType(u8),
    #[error("expected a {expected:?} record, found {found:?}")]
    WrongRecordType {
        expected: RecordType,
        found: RecordType,
    },
    #[error("invalid parameters in header: {0}")]
    InvalidParams(String),
    #[error("{0} unexpected trailing bytes")]
    TrailingBytes(usize),
    #[error("payload length {len} is not a multiple of the block size {block}")]
    BlockLength { len: usize, block: usize },
    #[error("non-zero padding bits in a packed row")]
    NonZeroPadding,
    #[error("information-set index {0} is out of range")]
    IndexOutOfRange(u32),
    #[error("information-set index {0} is repeated")]
    DuplicateIndex(u32),
    #[error("information-set indices are not ascending")]
    UnsortedIndices,
    #[error("secret key failed its integrity check: {0}")]
    Integrity(String),
}

impl FormatError {
    /// Stable numeric identifier of the error kind.
    pub fn code(&self) -> u8 {
        match self {
            Self::Truncated { .. } => 1,
            Self::BadMagic => 2,
            Self::UnsupportedVersion(_) => 3,
            Self::UnknownRecordType(_) => 4,
            Self::WrongRecordType { .. } => 5,
            Self::InvalidParams(_) => 6,
            Self::TrailingBytes(_) => 7,
            Self::BlockLength { .. } => 8,
            Self::NonZeroPadding => 9,
            Self::IndexOutOfRange(_) => 10,
            Self::DuplicateIndex(_) => 11,
            Self::UnsortedIndices => 12,
            Self::Integrity(_) => 13,
        }
    }
}

type Result<T> = std::result::Result<T, FormatError>;

fn write_header(out: &mut Vec<u8>, record: RecordType, p: &Params) {
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(record as u8);
    for v in [p.n, p.k, p.t] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.extend_from_slice(&p.epsilon.to_le_bytes());
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

/// Validates the header and returns the parameters and the payload.
pub fn read_header(bytes: &[u8], expected: RecordType) -> Result<(Params, &[u8])> {
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::Truncated {
            needed: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    if bytes[4] != VERSION {
        return Err(FormatError::UnsupportedVersion(bytes[4]));
    }
    let found = RecordType::from_byte(bytes[5]).ok_or(FormatError::UnknownRecordType(bytes[5]))?;
    if found != expected {
        return Err(FormatError::WrongRecordType { expected, found });
    }
    let epsilon = f64::from_le_bytes(bytes[18..26].try_into().expect("8 bytes"));
    let params = Params {
        n: u32_at(bytes, 6) as usize,
        k: u32_at(bytes, 10) as usize,
        t: u32_at(bytes, 14) as usize,
        epsilon,
        label: None,
    };
    params
        .validate()
        .map_err(|e| FormatError::InvalidParams(e.to_string()))?;
    Ok((params, &bytes[HEADER_LEN..]))
}

fn expect_len(payload: &[u8], needed: usize) -> Result<()> {
    if payload.len() < needed {
        return Err(FormatError::Truncated {
            needed: HEADER_LEN + needed,
            found: HEADER_LEN + payload.len(),
        });
    }
    if payload.len() > needed {
        return Err(FormatError::TrailingBytes(payload.len() - needed));
    }
    Ok(())
}

fn unpack(len: usize, bytes: &[u8]) -> Result<BitVector> {
    BitVector::from_bytes(len, bytes).map_err(|_| FormatError::NonZeroPadding)
}

pub fn serialize_public_key(pk: &PublicKey) -> Vec<u8> {
    let p = pk.params();
    let row_bytes = (p.n - p.k).div_ceil(8);
    let mut out = Vec::with_capacity(HEADER_LEN + p.k * row_bytes);
    write_header(&mut out, RecordType::PublicKey, p);
    for row in pk.q().row_vectors() {
        out.extend_from_slice(&row.to_bytes());
    }
    out
}

pub fn deserialize_public_key(bytes: &[u8]) -> Result<PublicKey> {
    let (params, payload) = read_header(bytes, RecordType::PublicKey)?;
    let cols = params.n - params.k;
    let row_bytes = cols.div_ceil(8);
    expect_len(payload, params.k * row_bytes)?;
    let rows = payload
        .chunks_exact(row_bytes)
        .map(|chunk| unpack(cols, chunk))
        .collect::<Result<Vec<_>>>()?;
    let q = BitMatrix::from_row_vectors(cols, rows)
        .map_err(|e| FormatError::InvalidParams(e.to_string()))?;
    PublicKey::new(params, q).map_err(|e| FormatError::InvalidParams(e.to_string()))
}

pub fn serialize_secret_key(sk: &SecretKey) -> Vec<u8> {
    let p = sk.params();
    let mut out = Vec::with_capacity(HEADER_LEN + SEED_LEN + 4 * p.k);
    write_header(&mut out, RecordType::SecretKey, p);
    out.extend_from_slice(sk.seed());
    for &i in sk.info_set() {
        out.extend_from_slice(&(i as u32 + 1).to_le_bytes());
    }
    out
}

/// Parses the seed and index list, then rebuilds `S`, `S⁻¹` and `P`.
pub fn deserialize_secret_key(bytes: &[u8]) -> Result<SecretKey> {
    let (params, payload) = read_header(bytes, RecordType::SecretKey)?;
    expect_len(payload, SEED_LEN + 4 * params.k)?;
    let seed: [u8; SEED_LEN] = payload[..SEED_LEN].try_into().expect("seed length");
    let mut info_set = Vec::with_capacity(params.k);
    let mut prev = 0u32;
    for chunk in payload[SEED_LEN..].chunks_exact(4) {
        let idx = u32::from_le_bytes(chunk.try_into().expect("4 bytes"));
        if idx == 0 || idx as usize > params.n {
            return Err(FormatError::IndexOutOfRange(idx));
        }
        if idx == prev {
            return Err(FormatError::DuplicateIndex(idx));
        }
        if idx < prev {
            return Err(FormatError::UnsortedIndices);
        }
        prev = idx;
        info_set.push(idx as usize - 1);
    }
    SecretKey::from_parts(params, seed, info_set).map_err(|e| FormatError::Integrity(e.to_string()))
}

/// Header followed by each block packed into `⌈n/8⌉` bytes.
pub fn serialize_ciphertexts(params: &Params, blocks: &[BitVector]) -> Vec<u8> {
    let block = params.n.div_ceil(8);
    let mut out = Vec::with_capacity(HEADER_LEN + blocks.len() * block);
    write_header(&mut out, RecordType::Ciphertext, params);
    for b in blocks {
        debug_assert_eq!(b.len(), params.n);
        out.extend_from_slice(&b.to_bytes());
    }
    out
}

pub fn deserialize_ciphertexts(bytes: &[u8]) -> Result<(Params, Vec<BitVector>)> {
    let (params, payload) = read_header(bytes, RecordType::Ciphertext)?;
    let block = params.n.div_ceil(8);
    if payload.len() % block != 0 {
        return Err(FormatError::BlockLength {
            len: payload.len(),
            block,
        });
    }
    let blocks = payload
        .chunks_exact(block)
        .map(|chunk| unpack(params.n, chunk))
        .collect::<Result<Vec<_>>>()?;
    Ok((params, blocks))
}
