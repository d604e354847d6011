//! Code tables: LDPC base graphs with RV offsets, the polar reliability
//! sequence and the polar interleaver patterns.

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ldpc::graph::{parse_ldpc_tables, LdpcTables};
use crate::polar::chain::PolarPatterns;
use crate::polar::construct::ReliabilitySequence;

pub const LDPC_FILE: &str = "ldpc_base_graphs.csv";
pub const RELIABILITY_FILE: &str = "polar_reliability.csv";
pub const PATTERNS_FILE: &str = "polar_patterns.csv";

const BUNDLED_LDPC: &str = include_str!("../assets/ldpc_base_graphs.csv");
const BUNDLED_RELIABILITY: &str = include_str!("../assets/polar_reliability.csv");
const BUNDLED_PATTERNS: &str = include_str!("../assets/polar_patterns.csv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assets {
    pub ldpc: LdpcTables,
    pub reliability: ReliabilitySequence,
    pub patterns: PolarPatterns,
    hash: String,
}

impl Assets {
    /// Parses and validates the three asset texts.
    pub fn from_texts(ldpc: &str, reliability: &str, patterns: &str) -> Result<Self> {
        let mut h = Sha256::new();
        for text in [ldpc, reliability, patterns] {
            h.update((text.len() as u64).to_le_bytes());
            h.update(text.as_bytes());
        }
        Ok(Self {
            ldpc: parse_ldpc_tables(ldpc)?,
            reliability: ReliabilitySequence::parse(reliability)?,
            patterns: PolarPatterns::parse(patterns)?,
            hash: hex::encode(&h.finalize()[..8]),
        })
    }

    /// Tables compiled into the library.
    pub fn bundled() -> Self {
        Self::from_texts(BUNDLED_LDPC, BUNDLED_RELIABILITY, BUNDLED_PATTERNS)
            .expect("bundled assets are valid")
    }

    /// Loads the three files from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|_| Error::AssetMissing(path))
        };
        Self::from_texts(
            &read(LDPC_FILE)?,
            &read(RELIABILITY_FILE)?,
            &read(PATTERNS_FILE)?,
        )
    }

    /// Short hex digest over the asset contents.
    pub fn content_hash(&self) -> &str {
        &self.hash
    }
}
