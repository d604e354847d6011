//! Quasi-cyclic LDPC coding for the shared channels.

pub mod chain;
pub mod codec;
pub mod decode;
pub mod graph;

pub use chain::{LdpcChain, LdpcRxOutcome, RateMatchConfig, SegmentationPlan, TransportBlock};
pub use codec::{encode, syndrome, CodeBlock, CodewordLdpc, Symbol};
pub use decode::{
    decode, decode_layered, DecodeResult, LdpcAlgorithm, LdpcDecodeConfig, LlrVector,
};
pub use graph::{
    adjacency, expand, kb_for, select_base_graph, select_lifting, BaseGraph, BaseGraphId,
    LdpcTables, LiftingConfig, ParityCheckMatrix,
};
