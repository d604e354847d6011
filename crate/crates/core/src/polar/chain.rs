//! Control-channel pipeline: CRC, input interleaving, segmentation, rate
//! matching and the receiver inverses.

use super::construct::{
    encode_butterfly, LinkDirection, PolarCodeConfig, RateMatchMode, ReliabilitySequence,
    SubblockPattern,
};
use super::decode::{decode_ca_scl_with, decode_sc, decode_scl, DEFAULT_LIST_SIZE};
use crate::crc::{crc_attach, crc_check, CrcPolynomial, CRC11, CRC24A, CRC6};
use crate::error::{Error, Result};
use crate::ldpc::decode::{LlrVector, SAT};

/// Largest control payload.
pub const MAX_PAYLOAD: usize = 1706;
/// Largest rate-matched length.
pub const MAX_E: usize = 8192;
/// Domain of the input interleaver.
pub const INTERLEAVER_MAX_K: usize = 164;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControlChannel {
    Dci,
    Uci,
    Bch,
}

impl ControlChannel {
    pub fn direction(self) -> LinkDirection {
        match self {
            Self::Uci => LinkDirection::Uplink,
            Self::Dci | Self::Bch => LinkDirection::Downlink,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlPayload {
    pub bits: Vec<u8>,
    pub channel: ControlChannel,
}

impl ControlPayload {
    pub fn new(bits: Vec<u8>, channel: ControlChannel) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyInput);
        }
        if bits.len() > MAX_PAYLOAD {
            return Err(Error::InvalidParameter(format!(
                "control payload of {} bits exceeds {MAX_PAYLOAD}",
                bits.len()
            )));
        }
        Ok(Self { bits, channel })
    }
}

/// CRC used for a control payload of `a` bits.
pub fn polar_crc_for(channel: ControlChannel, a: usize) -> CrcPolynomial {
    match channel.direction() {
        LinkDirection::Downlink => CRC24A,
        LinkDirection::Uplink if a >= 20 => CRC11,
        LinkDirection::Uplink => CRC6,
    }
}

pub fn polar_crc_attach(payload: &ControlPayload) -> Result<Vec<u8>> {
    crc_attach(
        &payload.bits,
        polar_crc_for(payload.channel, payload.bits.len()),
    )
}

/// Splits `a` into `c` equal blocks (zero padding at the head) and attaches
/// `crc` to each.
pub fn segment_polar(a: &[u8], c: usize, crc: CrcPolynomial) -> Result<Vec<Vec<u8>>> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(1..=2).contains(&c) {
        return Err(Error::InvalidParameter(format!(
            "segment count {c} not in 1..=2"
        )));
    }
    let padded_len = a.len().div_ceil(c) * c;
    let mut padded = vec![0u8; padded_len - a.len()];
    padded.extend_from_slice(a);
    padded
        .chunks(padded_len / c)
        .map(|blk| crc_attach(blk, crc))
        .collect()
}

/// `out[k] = src[idx[k]]`.
fn gather<T: Copy>(src: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| src[i]).collect()
}

/// Inverse of [`gather`] for a permutation `idx`.
fn scatter<T: Copy + Default>(src: &[T], idx: &[usize]) -> Vec<T> {
    let mut out = vec![T::default(); src.len()];
    for (&i, &v) in idx.iter().zip(src) {
        out[i] = v;
    }
    out
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            got,
        })
    }
}

/// Interleaver tables shipped with the polar assets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarPatterns {
    /// Input interleaver table over `0..164`.
    pub input: Vec<usize>,
    pub subblock: SubblockPattern,
}

const PI_HEADER: &str = "pi,k,pi_k";
const SB_HEADER: &str = "sb,index,label";

impl PolarPatterns {
    pub fn parse(text: &str) -> Result<Self> {
        let mut pi: Vec<Option<usize>> = vec![None; INTERLEAVER_MAX_K];
        let mut sb: [Option<usize>; 32] = [None; 32];
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line == PI_HEADER || line == SB_HEADER {
                continue;
            }
            let bad = |reason: String| Error::MalformedRow {
                line: lineno,
                reason,
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [tag, i, v] = fields[..] else {
                return Err(bad(format!("expected 3 fields, found {}", fields.len())));
            };
            let i: usize = i.parse().map_err(|_| bad(format!("not an index: {i:?}")))?;
            let v: usize = v.parse().map_err(|_| bad(format!("not a value: {v:?}")))?;
            let slot = match tag {
                "pi" => pi.get_mut(i),
                "sb" => sb.get_mut(i),
                _ => return Err(bad(format!("unknown row tag {tag:?}"))),
            }
            .ok_or_else(|| bad(format!("index {i} out of range")))?;
            if slot.replace(v).is_some() {
                return Err(Error::DuplicateEntry {
                    line: lineno,
                    what: format!("{tag} index {i}"),
                });
            }
        }
        let input = pi
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| Error::InvalidAsset(format!("input interleaver misses index {k}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut seen = [false; INTERLEAVER_MAX_K];
        for &v in &input {
            if v >= INTERLEAVER_MAX_K || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidAsset(format!(
                    "input interleaver is not a permutation (value {v})"
                )));
            }
        }
        let mut labels = [0usize; 32];
        for (k, v) in sb.into_iter().enumerate() {
            labels[k] = v.ok_or_else(|| {
                Error::InvalidAsset(format!("sub-block pattern misses index {k}"))
            })?;
        }
        Ok(Self {
            input,
            subblock: SubblockPattern::new(labels)?,
        })
    }

    /// Input interleaver permutation for `k` bits.
    pub fn input_permutation(&self, k: usize) -> Result<Vec<usize>> {
        if k > INTERLEAVER_MAX_K {
            return Err(Error::InterleaverDomain {
                k,
                max: INTERLEAVER_MAX_K,
            });
        }
        let drop = INTERLEAVER_MAX_K - k;
        Ok(self
            .input
            .iter()
            .filter(|&&v| v >= drop)
            .map(|&v| v - drop)
            .collect())
    }
}

pub fn input_interleave(c: &[u8], enabled: bool, patterns: &PolarPatterns) -> Result<Vec<u8>> {
    if !enabled {
        return Ok(c.to_vec());
    }
    Ok(gather(c, &patterns.input_permutation(c.len())?))
}

pub fn input_deinterleave<T: Copy + Default>(
    c: &[T],
    enabled: bool,
    patterns: &PolarPatterns,
) -> Result<Vec<T>> {
    if !enabled {
        return Ok(c.to_vec());
    }
    Ok(scatter(c, &patterns.input_permutation(c.len())?))
}

fn subblock_indices(n_len: usize, pattern: &SubblockPattern) -> Result<Vec<usize>> {
    if n_len < 32 || !n_len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "sub-block interleaving needs a power-of-two length of at least 32, got {n_len}"
        )));
    }
    Ok((0..n_len).map(|n| pattern.source(n, n_len)).collect())
}

/// Output slot `i` of the 32 sub-blocks receives input sub-block `pattern[i]`.
pub fn subblock_interleave<T: Copy>(d: &[T], pattern: &SubblockPattern) -> Result<Vec<T>> {
    Ok(gather(d, &subblock_indices(d.len(), pattern)?))
}

pub fn subblock_deinterleave<T: Copy + Default>(
    y: &[T],
    pattern: &SubblockPattern,
) -> Result<Vec<T>> {
    Ok(scatter(y, &subblock_indices(y.len(), pattern)?))
}

/// Circular-buffer positions read by bit selection.
pub fn bit_select_positions(n_len: usize, e: usize, mode: RateMatchMode) -> Result<Vec<usize>> {
    if e == 0 {
        return Err(Error::InvalidParameter("E must be positive".into()));
    }
    match mode {
        RateMatchMode::Repeat => Ok((0..e).map(|k| k % n_len).collect()),
        _ if e > n_len => Err(Error::InvalidParameter(format!(
            "{mode:?} needs E <= N, got E={e}, N={n_len}"
        ))),
        RateMatchMode::Puncture => Ok((n_len - e..n_len).collect()),
        RateMatchMode::Shorten => Ok((0..e).collect()),
    }
}

pub fn bit_select(s: &[u8], e: usize, mode: RateMatchMode) -> Result<Vec<u8>> {
    Ok(gather(s, &bit_select_positions(s.len(), e, mode)?))
}

/// Triangular interleaver order: output `k` takes input `order[k]`.
fn channel_interleaver_order(e: usize) -> Vec<usize> {
    let mut t = 0;
    while t * (t + 1) / 2 < e {
        t += 1;
    }
    // Row i holds T - i entries, written row by row.
    let mut row_start = Vec::with_capacity(t);
    let mut acc = 0;
    for i in 0..t {
        row_start.push(acc);
        acc += t - i;
    }
    let mut order = Vec::with_capacity(e);
    for j in 0..t {
        for (i, &start) in row_start.iter().enumerate().take(t - j) {
            let k = start + j;
            if k < e {
                order.push(k);
            }
            debug_assert!(j < t - i);
        }
    }
    order
}

pub fn channel_interleave<T: Copy>(e: &[T], enabled: bool) -> Vec<T> {
    if enabled {
        gather(e, &channel_interleaver_order(e.len()))
    } else {
        e.to_vec()
    }
}

pub fn channel_deinterleave<T: Copy + Default>(f: &[T], enabled: bool) -> Vec<T> {
    if enabled {
        scatter(f, &channel_interleaver_order(f.len()))
    } else {
        f.to_vec()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarRateMatchConfig {
    pub n_len: usize,
    pub e: usize,
    pub mode: RateMatchMode,
    pub subblock: SubblockPattern,
    pub channel_interleave: bool,
}

impl PolarRateMatchConfig {
    pub fn new(
        code: &PolarCodeConfig,
        subblock: SubblockPattern,
        channel_interleave: bool,
    ) -> Result<Self> {
        if code.e > MAX_E {
            return Err(Error::InvalidParameter(format!(
                "E={} exceeds {MAX_E}",
                code.e
            )));
        }
        Ok(Self {
            n_len: code.len(),
            e: code.e,
            mode: code.mode(),
            subblock,
            channel_interleave,
        })
    }
}

pub fn polar_rate_match(d: &[u8], cfg: &PolarRateMatchConfig) -> Result<Vec<u8>> {
    check_len("polar codeword length", cfg.n_len, d.len())?;
    let y = subblock_interleave(d, &cfg.subblock)?;
    let e = bit_select(&y, cfg.e, cfg.mode)?;
    Ok(channel_interleave(&e, cfg.channel_interleave))
}

pub fn polar_rate_dematch(llrs: &[f64], cfg: &PolarRateMatchConfig) -> Result<LlrVector> {
    check_len("polar block LLR length", cfg.e, llrs.len())?;
    let e = channel_deinterleave(llrs, cfg.channel_interleave);
    let mut y = vec![0.0; cfg.n_len];
    for (&p, &v) in bit_select_positions(cfg.n_len, cfg.e, cfg.mode)?
        .iter()
        .zip(&e)
    {
        y[p] += v;
    }
    if cfg.mode == RateMatchMode::Shorten {
        for v in &mut y[cfg.e..] {
            *v = SAT;
        }
    }
    Ok(LlrVector::from(subblock_deinterleave(&y, &cfg.subblock)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarDecoderKind {
    Sc,
    Scl { list_size: usize },
    CaScl { list_size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarDecoderConfig {
    pub kind: PolarDecoderKind,
    /// Min-sum approximation of the check-node combination.
    pub approx: bool,
}

impl Default for PolarDecoderConfig {
    fn default() -> Self {
        Self {
            kind: PolarDecoderKind::CaScl {
                list_size: DEFAULT_LIST_SIZE,
            },
            approx: false,
        }
    }
}

/// Parameters of a control-channel link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarChainParams {
    pub channel: ControlChannel,
    /// Payload bits `A`.
    pub a: usize,
    /// Rate-matched length `E` over all segments.
    pub e: usize,
    /// Segment count, 1 or 2.
    pub segments: usize,
    pub n_pc: usize,
}

impl PolarChainParams {
    pub fn new(channel: ControlChannel, a: usize, e: usize) -> Self {
        Self {
            channel,
            a,
            e,
            segments: 1,
            n_pc: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarRxOutcome {
    /// Best-effort payload estimate.
    pub payload: Vec<u8>,
    pub crc_ok: bool,
    /// Rank of the chosen list path per block (0 for SC).
    pub list_rank: Vec<usize>,
}

impl PolarRxOutcome {
    pub fn mean_list_rank(&self) -> f64 {
        self.list_rank.iter().sum::<usize>() as f64 / self.list_rank.len().max(1) as f64
    }
}

/// A configured control-channel link.
#[derive(Debug, Clone)]
pub struct PolarChain {
    pub params: PolarChainParams,
    pub crc: CrcPolynomial,
    /// Per-segment mother code.
    pub code: PolarCodeConfig,
    pub rate_match: PolarRateMatchConfig,
    pub input_interleave: bool,
    patterns: PolarPatterns,
    /// Padded payload length `A'`.
    padded_len: usize,
}

impl PolarChain {
    pub fn new(
        seq: &ReliabilitySequence,
        patterns: &PolarPatterns,
        params: PolarChainParams,
    ) -> Result<Self> {
        let PolarChainParams {
            channel,
            a,
            e,
            segments,
            n_pc,
        } = params;
        if a == 0 {
            return Err(Error::EmptyInput);
        }
        if a > MAX_PAYLOAD {
            return Err(Error::InvalidParameter(format!(
                "A={a} exceeds {MAX_PAYLOAD}"
            )));
        }
        if e > MAX_E {
            return Err(Error::InvalidParameter(format!("E={e} exceeds {MAX_E}")));
        }
        if !(1..=2).contains(&segments) {
            return Err(Error::InvalidParameter(format!(
                "segment count {segments} not in 1..=2"
            )));
        }
        let crc = polar_crc_for(channel, a);
        let padded_len = a.div_ceil(segments) * segments;
        let k = padded_len / segments + crc.len();
        let e_r = e / segments;
        let code =
            PolarCodeConfig::new(seq, &patterns.subblock, k, e_r, n_pc, channel.direction())?;
        let input_interleave = channel.direction() == LinkDirection::Downlink;
        if input_interleave && k > INTERLEAVER_MAX_K {
            return Err(Error::InterleaverDomain {
                k,
                max: INTERLEAVER_MAX_K,
            });
        }
        let rate_match = PolarRateMatchConfig::new(
            &code,
            patterns.subblock.clone(),
            channel.direction() == LinkDirection::Uplink,
        )?;
        Ok(Self {
            params,
            crc,
            code,
            rate_match,
            input_interleave,
            patterns: patterns.clone(),
            padded_len,
        })
    }

    pub fn transmit(&self, payload: &[u8]) -> Result<Vec<u8>> {
        check_len("payload length", self.params.a, payload.len())?;
        let blocks = segment_polar(payload, self.params.segments, self.crc)?;
        let mut out = Vec::with_capacity(self.params.e);
        for c in blocks {
            let c = input_interleave(&c, self.input_interleave, &self.patterns)?;
            let d = encode_butterfly(&self.code.assemble_u(&c)?, self.code.bit_reversal)?;
            out.extend(polar_rate_match(&d, &self.rate_match)?);
        }
        out.resize(self.params.e, 0);
        Ok(out)
    }

    pub fn receive(&self, llrs: &[f64], decoder: &PolarDecoderConfig) -> Result<PolarRxOutcome> {
        check_len("received LLR length", self.params.e, llrs.len())?;
        let e_r = self.rate_match.e;
        let mut padded = Vec::with_capacity(self.padded_len);
        let mut crc_ok = true;
        let mut list_rank = Vec::with_capacity(self.params.segments);
        for r in 0..self.params.segments {
            let block = polar_rate_dematch(&llrs[r * e_r..(r + 1) * e_r], &self.rate_match)?;
            let (info, rank) = self.decode_block(block.as_slice(), decoder)?;
            let c = input_deinterleave(&info, self.input_interleave, &self.patterns)?;
            crc_ok &= crc_check(&c, self.crc)?;
            padded.extend_from_slice(&c[..c.len() - self.crc.len()]);
            list_rank.push(rank);
        }
        Ok(PolarRxOutcome {
            payload: padded[self.padded_len - self.params.a..].to_vec(),
            crc_ok,
            list_rank,
        })
    }

    fn decode_block(&self, llr: &[f64], decoder: &PolarDecoderConfig) -> Result<(Vec<u8>, usize)> {
        let approx = decoder.approx;
        match decoder.kind {
            PolarDecoderKind::Sc => Ok((
                self.code.extract_info(&decode_sc(llr, &self.code, approx)?),
                0,
            )),
            PolarDecoderKind::Scl { list_size } => {
                let paths = decode_scl(llr, &self.code, list_size, approx)?;
                Ok((self.code.extract_info(&paths[0].u_hat), 0))
            }
            PolarDecoderKind::CaScl { list_size } => {
                let out = decode_ca_scl_with(llr, &self.code, list_size, approx, |info| {
                    input_deinterleave(info, self.input_interleave, &self.patterns)
                        .and_then(|c| crc_check(&c, self.crc))
                        .unwrap_or(false)
                })?;
                Ok((out.info, out.index))
            }
        }
    }
}
