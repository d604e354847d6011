//! Polar coding for the control channels.

pub mod chain;
pub mod construct;
pub mod decode;

pub use chain::{
    ControlChannel, ControlPayload, PolarChain, PolarChainParams, PolarDecoderConfig,
    PolarDecoderKind, PolarPatterns, PolarRateMatchConfig, PolarRxOutcome,
};
pub use construct::{
    determine_n, encode_butterfly, kron_generator, mode_for, LinkDirection, PolarCodeConfig,
    RateMatchMode, ReliabilitySequence, SubblockPattern,
};
pub use decode::{decode_ca_scl, decode_sc, decode_scl, CaSclOutcome, ScListPath};
