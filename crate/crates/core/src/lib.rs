//! 5G NR channel coding.
//!
//! * [`ldpc`]: quasi-cyclic LDPC for the shared channels, from base-graph
//!   expansion through rate matching, with sum-product, min-sum and layered
//!   decoders.
//! * [`polar`]: polar coding for the control channels, with SC, SCL and
//!   CRC-aided SCL decoding.
//! * [`sim`]: BPSK/AWGN Monte-Carlo harness producing BLER/BER records.
//!
//! Bits are `u8` values 0/1 throughout; LLRs are `f64` with positive values
//! favouring 0.

pub mod assets;
pub mod bits;
pub mod crc;
mod error;
pub mod ldpc;
pub mod polar;
pub mod sim;

pub use assets::Assets;
pub use crc::{CrcId, CrcPolynomial};
pub use error::{Error, Result};
pub use ldpc::{
    BaseGraph, BaseGraphId, DecodeResult, LdpcAlgorithm, LdpcChain, LdpcDecodeConfig,
    LiftingConfig, LlrVector, ParityCheckMatrix,
};
pub use polar::{ControlChannel, PolarChain, PolarCodeConfig, PolarDecoderKind};
pub use sim::{BlerRecord, CampaignConfig, ChainSpec, ChannelConfig, StopRule};
