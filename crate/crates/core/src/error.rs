use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the codec chains, the asset loaders and the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("word shorter than CRC: {len} bits, CRC has {crc_len}")]
    WordShorterThanCrc { len: usize, crc_len: usize },

    #[error("asset not found: {0}")]
    AssetMissing(PathBuf),
    #[error("malformed asset row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("shift out of range at line {line}: {shift}")]
    ShiftOutOfRange { line: usize, shift: i64 },
    #[error("duplicate entry at line {line}: {what}")]
    DuplicateEntry { line: usize, what: String },
    #[error("base graph structure violated: {0}")]
    Structure(String),
    #[error("invalid asset: {0}")]
    InvalidAsset(String),

    #[error("payload exceeds maximum lifting: Kr={kr} > Kb*384={max}")]
    PayloadExceedsLifting { kr: usize, max: usize },
    #[error("transport block too large: B={0}")]
    TransportBlockTooLarge(usize),
    #[error("dimension mismatch: {what} expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("filler symbol outside the block suffix at position {0}")]
    FillerNotSuffix(usize),
    #[error("test-support bound exceeded: {0}")]
    TestSupportBound(String),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("over-frozen configuration: {eligible} eligible positions, {needed} needed")]
    OverFrozen { eligible: usize, needed: usize },
    #[error("input interleaver domain exceeded: K={k} > {max}")]
    InterleaverDomain { k: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
