//! Transport-block pipeline: TB CRC, segmentation, encoding, rate matching
//! and concatenation, with the receiver inverses.

use std::ops::Range;

use super::codec::{encode, CodeBlock, CodewordLdpc};
use super::decode::{decode, DecodeResult, LdpcDecodeConfig, LlrVector, SAT};
use super::graph::{
    expand, kb_for, select_base_graph, select_lifting, BaseGraphId, LdpcTables, LiftingConfig,
    ParityCheckMatrix,
};
use crate::crc::{crc_attach, crc_check, select_tb_crc, CrcPolynomial, CRC24B};
use crate::error::{Error, Result};

/// Largest number of code blocks a transport block may be split into.
pub const MAX_CODE_BLOCKS: usize = 256;

/// Per-block CRC length when a transport block is segmented.
const BLOCK_CRC_LEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Uplink,
    Downlink,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportBlock {
    pub payload: Vec<u8>,
    pub direction: Direction,
}

impl TransportBlock {
    pub fn new(payload: Vec<u8>, direction: Direction) -> Result<Self> {
        if payload.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self { payload, direction })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentationPlan {
    pub bg: BaseGraphId,
    /// Number of code blocks `C`.
    pub c: usize,
    /// Nominal info+CRC bits per block, `ceil((B + C·L) / C)`.
    pub kr: usize,
    /// Block capacity `K = Kb,max · Zc`.
    pub k: usize,
    pub lifting: LiftingConfig,
    /// Per-block CRC length, 0 or 24.
    pub block_crc_len: usize,
    /// Payload bits (excluding the per-block CRC) carried by each block.
    pub data_bits: Vec<usize>,
    /// Filler count of each block.
    pub filler: Vec<usize>,
}

impl SegmentationPlan {
    /// Plans the split of `b` CRC-attached transport-block bits.
    pub fn new(b: usize, bg: BaseGraphId) -> Result<Self> {
        if b == 0 {
            return Err(Error::EmptyInput);
        }
        let kcb = bg.max_block_size();
        let (c, l) = if b <= kcb {
            (1, 0)
        } else {
            (b.div_ceil(kcb - BLOCK_CRC_LEN), BLOCK_CRC_LEN)
        };
        if c > MAX_CODE_BLOCKS {
            return Err(Error::TransportBlockTooLarge(b));
        }
        let kr = (b + c * l).div_ceil(c);
        let lifting = select_lifting(kr, kb_for(bg, b))?;
        let k = bg.kb_max() * lifting.zc;
        let per_block = kr - l;
        let data_bits: Vec<usize> = (0..c)
            .map(|r| {
                if r + 1 < c {
                    per_block
                } else {
                    b - per_block * (c - 1)
                }
            })
            .collect();
        let filler = data_bits.iter().map(|d| k - d - l).collect();
        Ok(Self {
            bg,
            c,
            kr,
            k,
            lifting,
            block_crc_len: l,
            data_bits,
            filler,
        })
    }

    pub fn zc(&self) -> usize {
        self.lifting.zc
    }

    /// Length of each encoded block `d`.
    pub fn n_r(&self) -> usize {
        self.bg.codeword_block_cols() * self.lifting.zc
    }

    /// Filler positions of block `r` in codeword coordinates.
    pub fn filler_range(&self, r: usize) -> Range<usize> {
        let two_z = 2 * self.zc();
        let kr = self.k - self.filler[r];
        kr.max(two_z) - two_z..self.k - two_z
    }
}

/// Splits CRC-attached transport-block bits into code blocks.
pub fn segment(b: &[u8], bg: BaseGraphId) -> Result<(SegmentationPlan, Vec<CodeBlock>)> {
    let plan = SegmentationPlan::new(b.len(), bg)?;
    let mut blocks = Vec::with_capacity(plan.c);
    let mut offset = 0;
    for &n in &plan.data_bits {
        let data = &b[offset..offset + n];
        offset += n;
        let bits = if plan.block_crc_len > 0 {
            crc_attach(data, CRC24B)?
        } else {
            data.to_vec()
        };
        blocks.push(CodeBlock::new(&bits, plan.k)?);
    }
    Ok((plan, blocks))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateMatchConfig {
    pub bg: BaseGraphId,
    pub zc: usize,
    pub rv: usize,
    /// Circular-buffer start offset for `rv`.
    pub k0: usize,
    /// Output length of each block.
    pub e: Vec<usize>,
    /// Filler positions of each block, in codeword coordinates.
    pub filler: Vec<Range<usize>>,
    /// Circular buffer length.
    pub n_r: usize,
}

impl RateMatchConfig {
    pub fn new(plan: &SegmentationPlan, g: usize, rv: usize, tables: &LdpcTables) -> Result<Self> {
        if rv > 3 {
            return Err(Error::InvalidParameter(format!(
                "redundancy version {rv} not in 0..=3"
            )));
        }
        if g < plan.c {
            return Err(Error::InvalidParameter(format!(
                "G={g} is smaller than the {} code blocks",
                plan.c
            )));
        }
        let n_r = plan.n_r();
        Ok(Self {
            bg: plan.bg,
            zc: plan.zc(),
            rv,
            k0: tables.rv.k0(plan.bg, rv, n_r, plan.zc()),
            e: split_even(g, plan.c),
            filler: (0..plan.c).map(|r| plan.filler_range(r)).collect(),
            n_r,
        })
    }

    /// Codeword positions read for block `r`, in transmission order.
    pub fn positions(&self, r: usize) -> Result<Vec<usize>> {
        let e = *self
            .e
            .get(r)
            .ok_or(Error::InvalidParameter(format!("no code block {r}")))?;
        if e == 0 {
            return Err(Error::InvalidParameter(
                "rate-matched length must be positive".into(),
            ));
        }
        let filler = &self.filler[r];
        if filler.len() >= self.n_r {
            return Err(Error::Structure("circular buffer holds only filler".into()));
        }
        let mut out = Vec::with_capacity(e);
        let mut j = 0;
        while out.len() < e {
            let p = (self.k0 + j) % self.n_r;
            if !filler.contains(&p) {
                out.push(p);
            }
            j += 1;
        }
        Ok(out)
    }
}

/// `total` split into `parts` lengths differing by at most one, larger ones last.
fn split_even(total: usize, parts: usize) -> Vec<usize> {
    let base = total / parts;
    let extra = total % parts;
    (0..parts)
        .map(|r| base + usize::from(r >= parts - extra))
        .collect()
}

pub fn rate_match(cw: &CodewordLdpc, cfg: &RateMatchConfig, block: usize) -> Result<Vec<u8>> {
    if cw.len() != cfg.n_r {
        return Err(Error::DimensionMismatch {
            what: "codeword length",
            expected: cfg.n_r,
            got: cw.len(),
        });
    }
    let bits = cw.bits_with_zero_filler();
    Ok(cfg.positions(block)?.into_iter().map(|p| bits[p]).collect())
}

/// Maps received LLRs back onto the full decoder input of length `N_r + 2Zc`.
pub fn rate_dematch(llrs: &[f64], cfg: &RateMatchConfig, block: usize) -> Result<LlrVector> {
    let positions = cfg.positions(block)?;
    if llrs.len() != positions.len() {
        return Err(Error::DimensionMismatch {
            what: "block LLR length",
            expected: positions.len(),
            got: llrs.len(),
        });
    }
    let two_z = 2 * cfg.zc;
    let mut out = vec![0.0; cfg.n_r + two_z];
    for (&p, &v) in positions.iter().zip(llrs) {
        out[two_z + p] += v;
    }
    for p in cfg.filler[block].clone() {
        out[two_z + p] = SAT;
    }
    Ok(LlrVector::from(out))
}

pub fn concatenate(blocks: &[Vec<u8>]) -> Result<Vec<u8>> {
    if blocks.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(blocks.concat())
}

pub fn deconcatenate<T: Clone>(seq: &[T], lengths: &[usize]) -> Result<Vec<Vec<T>>> {
    let total: usize = lengths.iter().sum();
    if total != seq.len() {
        return Err(Error::DimensionMismatch {
            what: "concatenated length",
            expected: total,
            got: seq.len(),
        });
    }
    let mut rest = seq;
    Ok(lengths
        .iter()
        .map(|&n| {
            let (head, tail) = rest.split_at(n);
            rest = tail;
            head.to_vec()
        })
        .collect())
}

/// Receiver result for one transport block.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcRxOutcome {
    /// Best-effort payload estimate, present even on failure.
    pub payload: Vec<u8>,
    pub tb_crc_ok: bool,
    /// Blocks whose CRC failed; with a single block, a TB CRC failure marks block 0.
    pub failed_blocks: Vec<usize>,
    pub blocks: Vec<DecodeResult>,
}

impl LdpcRxOutcome {
    pub fn success(&self) -> bool {
        self.tb_crc_ok && self.failed_blocks.is_empty()
    }

    /// Mean decoder iterations over the code blocks.
    pub fn mean_iterations(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.iterations_used as f64)
            .sum::<f64>()
            / self.blocks.len().max(1) as f64
    }
}

/// A configured LDPC link for fixed `(A, G, rv)`.
#[derive(Debug, Clone)]
pub struct LdpcChain {
    pub a: usize,
    pub g: usize,
    pub tb_crc: CrcPolynomial,
    pub plan: SegmentationPlan,
    pub rate_match: RateMatchConfig,
    pub pcm: ParityCheckMatrix,
}

impl LdpcChain {
    /// `rate` is the target rate used for base-graph selection; `None` means `A/G`.
    pub fn new(
        tables: &LdpcTables,
        a: usize,
        g: usize,
        rv: usize,
        rate: Option<f64>,
    ) -> Result<Self> {
        if a == 0 {
            return Err(Error::EmptyInput);
        }
        if g == 0 {
            return Err(Error::InvalidParameter("G must be positive".into()));
        }
        let rate = rate.unwrap_or(a as f64 / g as f64);
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "target rate {rate} must be positive"
            )));
        }
        Self::with_base_graph(tables, a, g, rv, select_base_graph(a, rate))
    }

    /// Like [`LdpcChain::new`] with the base graph fixed by the caller.
    pub fn with_base_graph(
        tables: &LdpcTables,
        a: usize,
        g: usize,
        rv: usize,
        bg: BaseGraphId,
    ) -> Result<Self> {
        if a == 0 {
            return Err(Error::EmptyInput);
        }
        if g == 0 {
            return Err(Error::InvalidParameter("G must be positive".into()));
        }
        let tb_crc = select_tb_crc(a);
        let plan = SegmentationPlan::new(a + tb_crc.len(), bg)?;
        let rate_match = RateMatchConfig::new(&plan, g, rv, tables)?;
        let pcm = expand(tables.graph(bg), plan.lifting);
        Ok(Self {
            a,
            g,
            tb_crc,
            plan,
            rate_match,
            pcm,
        })
    }

    pub fn transmit(&self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() != self.a {
            return Err(Error::DimensionMismatch {
                what: "payload length",
                expected: self.a,
                got: payload.len(),
            });
        }
        let b = crc_attach(payload, self.tb_crc)?;
        let (_, blocks) = segment(&b, self.plan.bg)?;
        let out = blocks
            .iter()
            .enumerate()
            .map(|(r, block)| {
                let cw = encode(block, &self.pcm, self.plan.bg)?;
                rate_match(&cw, &self.rate_match, r)
            })
            .collect::<Result<Vec<_>>>()?;
        concatenate(&out)
    }

    pub fn receive(&self, llrs: &[f64], cfg: &LdpcDecodeConfig) -> Result<LdpcRxOutcome> {
        if llrs.len() != self.g {
            return Err(Error::DimensionMismatch {
                what: "received LLR length",
                expected: self.g,
                got: llrs.len(),
            });
        }
        let per_block = deconcatenate(llrs, &self.rate_match.e)?;
        let l = self.plan.block_crc_len;
        let mut b = Vec::with_capacity(self.a + self.tb_crc.len());
        let mut failed = Vec::new();
        let mut blocks = Vec::with_capacity(self.plan.c);
        for (r, block_llrs) in per_block.iter().enumerate() {
            let input = rate_dematch(block_llrs, &self.rate_match, r)?;
            let res = decode(&input, &self.pcm, cfg)?;
            let data = self.plan.data_bits[r];
            if l > 0 && !crc_check(&res.hard_bits[..data + l], CRC24B)? {
                failed.push(r);
            }
            b.extend_from_slice(&res.hard_bits[..data]);
            blocks.push(res);
        }
        let tb_crc_ok = crc_check(&b, self.tb_crc)?;
        if !tb_crc_ok && self.plan.c == 1 {
            failed.push(0);
        }
        b.truncate(self.a);
        Ok(LdpcRxOutcome {
            payload: b,
            tb_crc_ok,
            failed_blocks: failed,
            blocks,
        })
    }
}

/// Transmitter path for one transport block.
pub fn run_tx(
    tables: &LdpcTables,
    tb: &TransportBlock,
    g: usize,
    rv: usize,
    rate: Option<f64>,
) -> Result<Vec<u8>> {
    LdpcChain::new(tables, tb.payload.len(), g, rv, rate)?.transmit(&tb.payload)
}
