//! BPSK over AWGN and the seeded Monte-Carlo BLER/BER engine.

pub mod report;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::assets::Assets;
use crate::error::{Error, Result};
use crate::ldpc::chain::LdpcChain;
use crate::ldpc::decode::{LdpcDecodeConfig, LlrVector};
use crate::ldpc::graph::BaseGraphId;
use crate::polar::chain::{PolarChain, PolarChainParams, PolarDecoderConfig};

/// RNG stream for payload bits.
pub const PAYLOAD_STREAM: u64 = 0;
/// RNG stream for channel noise.
pub const NOISE_STREAM: u64 = 1;

/// Frames decoded together before the stop rule is evaluated.
const BATCH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub ebn0_db: f64,
    /// Information rate used to scale Eb.
    pub code_rate: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.code_rate > 0.0 && self.code_rate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "code rate {} outside (0, 1]",
                self.code_rate
            )));
        }
        if !self.ebn0_db.is_finite() {
            return Err(Error::InvalidParameter("Eb/N0 must be finite".into()));
        }
        Ok(())
    }

    /// Noise variance per real dimension for unit-energy BPSK.
    pub fn sigma2(&self) -> f64 {
        1.0 / (2.0 * self.code_rate * 10f64.powf(self.ebn0_db / 10.0))
    }
}

/// Independent generator for `(seed, frame_index, stream)`.
pub fn frame_rng(seed: u64, frame_index: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((frame_index << 8) | (stream & 0xff));
    rng
}

pub fn random_bits(len: usize, seed: u64, frame_index: u64) -> Vec<u8> {
    let mut rng = frame_rng(seed, frame_index, PAYLOAD_STREAM);
    (0..len).map(|_| u8::from(rng.random::<bool>())).collect()
}

/// BPSK (0 → +1, 1 → −1) plus Gaussian noise, returned as channel LLRs `2y/σ²`.
pub fn bpsk_llr(bits: &[u8], cfg: &ChannelConfig, frame_index: u64) -> LlrVector {
    let sigma2 = cfg.sigma2();
    let sigma = sigma2.sqrt();
    let mut rng = frame_rng(cfg.seed, frame_index, NOISE_STREAM);
    let llrs: Vec<f64> = bits
        .iter()
        .map(|&b| {
            let x = if b & 1 == 0 { 1.0 } else { -1.0 };
            let n: f64 = rng.sample(StandardNormal);
            2.0 * (x + sigma * n) / sigma2
        })
        .collect();
    LlrVector::from(llrs)
}

/// Which link to simulate.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainSpec {
    Ldpc {
        a: usize,
        g: usize,
        rv: usize,
        /// Target rate for base-graph selection; `A/G` when absent.
        rate: Option<f64>,
        /// Overrides rate-based base-graph selection.
        base_graph: Option<BaseGraphId>,
        decoder: LdpcDecodeConfig,
    },
    Polar {
        params: PolarChainParams,
        decoder: PolarDecoderConfig,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub max_frames: u64,
    pub max_block_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            max_frames: 100_000,
            max_block_errors: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub chain: ChainSpec,
    pub ebn0_db: Vec<f64>,
    pub stop: StopRule,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlerRecord {
    pub ebn0_db: f64,
    pub frames: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    /// Payload bits per frame.
    pub payload_bits: usize,
    /// Mean LDPC iterations, or mean selected list rank for polar.
    pub mean_iterations: f64,
    pub elapsed_seconds: f64,
}

impl BlerRecord {
    pub fn bler(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.block_errors as f64 / self.frames as f64
        }
    }

    pub fn ber(&self) -> f64 {
        let total = self.frames * self.payload_bits as u64;
        if total == 0 {
            0.0
        } else {
            self.bit_errors as f64 / total as f64
        }
    }
}

/// A link ready to run frames.
#[derive(Debug, Clone)]
pub enum Link {
    Ldpc(LdpcChain, LdpcDecodeConfig),
    Polar(PolarChain, PolarDecoderConfig),
}

/// Result of one simulated frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameOutcome {
    pub bit_errors: u64,
    /// Decoder effort: iterations or list rank.
    pub effort: f64,
}

impl Link {
    pub fn build(assets: &Assets, spec: &ChainSpec) -> Result<Self> {
        match spec {
            ChainSpec::Ldpc {
                a,
                g,
                rv,
                rate,
                base_graph,
                decoder,
            } => {
                decoder.validate()?;
                let chain = match base_graph {
                    Some(bg) => LdpcChain::with_base_graph(&assets.ldpc, *a, *g, *rv, *bg)?,
                    None => LdpcChain::new(&assets.ldpc, *a, *g, *rv, *rate)?,
                };
                Ok(Self::Ldpc(chain, *decoder))
            }
            ChainSpec::Polar { params, decoder } => Ok(Self::Polar(
                PolarChain::new(&assets.reliability, &assets.patterns, *params)?,
                *decoder,
            )),
        }
    }

    pub fn payload_len(&self) -> usize {
        match self {
            Self::Ldpc(c, _) => c.a,
            Self::Polar(c, _) => c.params.a,
        }
    }

    pub fn coded_len(&self) -> usize {
        match self {
            Self::Ldpc(c, _) => c.g,
            Self::Polar(c, _) => c.params.e,
        }
    }

    pub fn code_rate(&self) -> f64 {
        self.payload_len() as f64 / self.coded_len() as f64
    }

    /// Transmits a fresh payload for `frame_index` over the channel and decodes it.
    pub fn run_frame(&self, channel: &ChannelConfig, frame_index: u64) -> Result<FrameOutcome> {
        let payload = random_bits(self.payload_len(), channel.seed, frame_index);
        let (tx, decoded, effort) = match self {
            Self::Ldpc(chain, dec) => {
                let tx = chain.transmit(&payload)?;
                let rx = chain.receive(bpsk_llr(&tx, channel, frame_index).as_slice(), dec)?;
                (tx, rx.payload.clone(), rx.mean_iterations())
            }
            Self::Polar(chain, dec) => {
                let tx = chain.transmit(&payload)?;
                let rx = chain.receive(bpsk_llr(&tx, channel, frame_index).as_slice(), dec)?;
                (tx, rx.payload.clone(), rx.mean_list_rank())
            }
        };
        drop(tx);
        let bit_errors = payload.iter().zip(&decoded).filter(|(a, b)| a != b).count() as u64;
        Ok(FrameOutcome { bit_errors, effort })
    }
}

fn run_point(link: &Link, channel: &ChannelConfig, stop: &StopRule) -> Result<BlerRecord> {
    let start = Instant::now();
    let mut rec = BlerRecord {
        ebn0_db: channel.ebn0_db,
        frames: 0,
        block_errors: 0,
        bit_errors: 0,
        payload_bits: link.payload_len(),
        mean_iterations: 0.0,
        elapsed_seconds: 0.0,
    };
    let mut effort = 0.0;
    'outer: while rec.frames < stop.max_frames && rec.block_errors < stop.max_block_errors {
        let first = rec.frames;
        let count = (stop.max_frames - first).min(BATCH as u64);
        let batch: Vec<FrameOutcome> = (first..first + count)
            .into_par_iter()
            .map(|f| link.run_frame(channel, f))
            .collect::<Result<_>>()?;
        for out in batch {
            rec.frames += 1;
            rec.bit_errors += out.bit_errors;
            rec.block_errors += u64::from(out.bit_errors > 0);
            effort += out.effort;
            if rec.block_errors >= stop.max_block_errors {
                break 'outer;
            }
        }
    }
    rec.mean_iterations = if rec.frames == 0 {
        0.0
    } else {
        effort / rec.frames as f64
    };
    rec.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(rec)
}

/// Runs every SNR point in order. Counters do not depend on the thread count.
pub fn run_campaign(assets: &Assets, cfg: &CampaignConfig) -> Result<Vec<BlerRecord>> {
    if cfg.ebn0_db.is_empty() {
        return Err(Error::InvalidParameter("no Eb/N0 points".into()));
    }
    if cfg.stop.max_frames == 0 || cfg.stop.max_block_errors == 0 {
        return Err(Error::InvalidParameter(
            "stop limits must be positive".into(),
        ));
    }
    let link = Link::build(assets, &cfg.chain)?;
    let channels: Vec<ChannelConfig> = cfg
        .ebn0_db
        .iter()
        .map(|&ebn0_db| ChannelConfig {
            ebn0_db,
            code_rate: link.code_rate(),
            seed: cfg.seed,
        })
        .collect();
    for c in &channels {
        c.validate()?;
    }
    let body = || {
        channels
            .iter()
            .map(|c| run_point(&link, c, &cfg.stop))
            .collect()
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(body),
        None => body(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_at_zero_db_rate_half() {
        let c = ChannelConfig {
            ebn0_db: 0.0,
            code_rate: 0.5,
            seed: 1,
        };
        assert!((c.sigma2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn llrs_repeat_per_frame() {
        let c = ChannelConfig {
            ebn0_db: 2.0,
            code_rate: 0.5,
            seed: 9,
        };
        let bits = random_bits(64, 9, 3);
        assert_eq!(bpsk_llr(&bits, &c, 3), bpsk_llr(&bits, &c, 3));
        assert_ne!(bpsk_llr(&bits, &c, 3), bpsk_llr(&bits, &c, 4));
    }

    #[test]
    fn high_snr_signs() {
        let c = ChannelConfig {
            ebn0_db: 60.0,
            code_rate: 0.5,
            seed: 5,
        };
        let bits = random_bits(10_000, 5, 0);
        let llr = bpsk_llr(&bits, &c, 0);
        for (b, l) in bits.iter().zip(llr.as_slice()) {
            assert_eq!(crate::bits::hard_decision(*l), *b);
        }
    }
}
