//! Mother-code construction: generator, butterfly encoder, code length and
//! frozen set.

use crate::error::{Error, Result};

/// Largest mother-code exponent covered by the reliability sequence.
pub const N_MAX_EXPONENT: usize = 10;
pub const N_MIN_EXPONENT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkDirection {
    Uplink,
    Downlink,
}

impl LinkDirection {
    pub fn n_max(self) -> usize {
        match self {
            Self::Downlink => 9,
            Self::Uplink => 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateMatchMode {
    Puncture,
    Shorten,
    Repeat,
}

/// Rate-matching mode for an `(E, N, K)` configuration.
pub fn mode_for(e: usize, n_len: usize, k: usize) -> RateMatchMode {
    if e >= n_len {
        RateMatchMode::Repeat
    } else if 16 * k <= 7 * e {
        RateMatchMode::Puncture
    } else {
        RateMatchMode::Shorten
    }
}

/// Channel indices ordered from least to most reliable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilitySequence(Vec<usize>);

const RELIABILITY_HEADER: &str = "rank,channel_index";

impl ReliabilitySequence {
    /// Validates that `order` is a permutation of `0..order.len()` with a
    /// power-of-two length.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if !n.is_power_of_two() {
            return Err(Error::InvalidAsset(format!(
                "reliability sequence length {n} is not a power of two"
            )));
        }
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidAsset(format!(
                    "reliability sequence is not a permutation (index {i})"
                )));
            }
        }
        Ok(Self(order))
    }

    /// Parses the `rank,channel_index` CSV.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Option<usize>> = Vec::new();
        let mut header = false;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == RELIABILITY_HEADER {
                header = true;
                continue;
            }
            if !header {
                return Err(Error::MalformedRow {
                    line: lineno,
                    reason: "data before the header".into(),
                });
            }
            let bad = |reason: &str| Error::MalformedRow {
                line: lineno,
                reason: reason.into(),
            };
            let (rank, index) = line
                .split_once(',')
                .ok_or_else(|| bad("expected two fields"))?;
            let rank: usize = rank
                .trim()
                .parse()
                .map_err(|_| bad("rank is not an integer"))?;
            let index: usize = index
                .trim()
                .parse()
                .map_err(|_| bad("index is not an integer"))?;
            if rank >= 1 << N_MAX_EXPONENT {
                return Err(bad("rank out of range"));
            }
            if rows.len() <= rank {
                rows.resize(rank + 1, None);
            }
            if rows[rank].replace(index).is_some() {
                return Err(Error::DuplicateEntry {
                    line: lineno,
                    what: format!("rank {rank}"),
                });
            }
        }
        let order = rows
            .into_iter()
            .enumerate()
            .map(|(rank, v)| v.ok_or_else(|| Error::InvalidAsset(format!("missing rank {rank}"))))
            .collect::<Result<Vec<_>>>()?;
        if order.len() != 1 << N_MAX_EXPONENT {
            return Err(Error::InvalidAsset(format!(
                "reliability sequence has {} entries, expected {}",
                order.len(),
                1 << N_MAX_EXPONENT
            )));
        }
        Self::new(order)
    }

    /// Ordering from Bhattacharyya parameters with design value 0.5.
    pub fn bhattacharyya(n: usize) -> Self {
        let mut z = vec![0.5f64];
        for _ in 0..n {
            z = z.iter().flat_map(|&v| [2.0 * v - v * v, v * v]).collect();
        }
        let mut order: Vec<usize> = (0..z.len()).collect();
        // Least reliable (largest z) first; ties by index.
        order.sort_by(|&a, &b| z[b].total_cmp(&z[a]).then(a.cmp(&b)));
        Self(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Indices below `n_len`, least reliable first.
    pub fn restricted(&self, n_len: usize) -> Vec<usize> {
        self.0.iter().copied().filter(|&i| i < n_len).collect()
    }
}

/// `ceil(log2(x))` for `x >= 1`.
fn ceil_log2(x: usize) -> usize {
    x.next_power_of_two().trailing_zeros() as usize
}

/// Mother-code exponent `n` for `E` coded bits carrying `K` bits.
pub fn determine_n(e: usize, k: usize, direction: LinkDirection) -> usize {
    let c = ceil_log2(e.max(1));
    let n1 = if c >= 1 && 8 * e <= 9 * (1 << (c - 1)) && 16 * k < 9 * e {
        c - 1
    } else {
        c
    };
    // r_min = 1/8
    let n2 = ceil_log2((8 * k).max(1));
    n1.min(n2).min(direction.n_max()).max(N_MIN_EXPONENT)
}

fn bit_reverse(i: usize, n: usize) -> usize {
    if n == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS as usize - n)
    }
}

/// Dense `N×N` generator, natural order or with bit-reversed rows.
pub fn kron_generator(n: usize, bit_reversal: bool) -> Result<Vec<Vec<u8>>> {
    if n > N_MAX_EXPONENT {
        return Err(Error::TestSupportBound(format!(
            "kron_generator supports n <= {N_MAX_EXPONENT}, got {n}"
        )));
    }
    let size = 1usize << n;
    // F^{⊗n}[i][j] = 1 iff the bits of j are a subset of the bits of i.
    let natural = |i: usize, j: usize| u8::from(i & j == j);
    Ok((0..size)
        .map(|i| {
            let row = if bit_reversal { bit_reverse(i, n) } else { i };
            (0..size).map(|j| natural(row, j)).collect()
        })
        .collect())
}

/// In-place butterfly computing `x = u · F^{⊗n}`.
fn butterfly(x: &mut [u8]) {
    let n_len = x.len();
    let mut half = 1;
    while half < n_len {
        for block in x.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        half *= 2;
    }
}

/// Encodes `u`; with `bit_reversal` the input is first permuted by index
/// bit reversal.
pub fn encode_butterfly(u: &[u8], bit_reversal: bool) -> Result<Vec<u8>> {
    let n_len = u.len();
    if !n_len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n_len));
    }
    let n = n_len.trailing_zeros() as usize;
    let mut x: Vec<u8> = if bit_reversal {
        (0..n_len).map(|i| u[bit_reverse(i, n)] & 1).collect()
    } else {
        u.iter().map(|b| b & 1).collect()
    };
    butterfly(&mut x);
    Ok(x)
}

/// Sub-block interleaver pattern over 32 labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubblockPattern([usize; 32]);

impl SubblockPattern {
    pub fn new(labels: [usize; 32]) -> Result<Self> {
        let mut seen = [false; 32];
        for &l in &labels {
            if l >= 32 || std::mem::replace(&mut seen[l], true) {
                return Err(Error::InvalidAsset(format!(
                    "sub-block pattern is not a permutation (label {l})"
                )));
            }
        }
        Ok(Self(labels))
    }

    pub fn identity() -> Self {
        Self(std::array::from_fn(|i| i))
    }

    pub fn labels(&self) -> &[usize; 32] {
        &self.0
    }

    /// Source position of interleaved position `n` for a length-`n_len` word.
    pub fn source(&self, n: usize, n_len: usize) -> usize {
        let sub = n_len / 32;
        self.0[n / sub] * sub + n % sub
    }
}

/// Indices forced frozen because rate matching leaves their coded bits
/// unobservable or known.
pub fn pre_frozen(
    n_len: usize,
    e: usize,
    mode: RateMatchMode,
    pattern: &SubblockPattern,
) -> Vec<usize> {
    let mut out = Vec::new();
    match mode {
        RateMatchMode::Repeat => {}
        RateMatchMode::Puncture => {
            out.extend((0..n_len - e).map(|n| pattern.source(n, n_len)));
            let bound = if 4 * e >= 3 * n_len {
                // ceil(3N/4 - E/2)
                (3 * n_len - 2 * e).div_ceil(4)
            } else {
                // ceil(9N/16 - E/4)
                (9 * n_len).saturating_sub(4 * e).div_ceil(16)
            };
            out.extend(0..bound.min(n_len));
        }
        RateMatchMode::Shorten => out.extend((e..n_len).map(|n| pattern.source(n, n_len))),
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Frozen mask with `N - K - n_pc` frozen positions.
pub fn build_frozen_set(
    seq: &ReliabilitySequence,
    pattern: &SubblockPattern,
    n_len: usize,
    k: usize,
    n_pc: usize,
    e: usize,
) -> Result<Vec<bool>> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    if n_len < 32 || !n_len.is_power_of_two() || n_len > seq.len() {
        return Err(Error::InvalidParameter(format!(
            "mother code length {n_len} must be a power of two in 32..={}",
            seq.len()
        )));
    }
    let mode = mode_for(e, n_len, k);
    let mut frozen = vec![true; n_len];
    let mut blocked = vec![false; n_len];
    for i in pre_frozen(n_len, e, mode, pattern) {
        blocked[i] = true;
    }
    let eligible: Vec<usize> = seq
        .restricted(n_len)
        .into_iter()
        .filter(|&i| !blocked[i])
        .collect();
    let needed = k + n_pc;
    if eligible.len() < needed {
        return Err(Error::OverFrozen {
            eligible: eligible.len(),
            needed,
        });
    }
    for &i in &eligible[eligible.len() - needed..] {
        frozen[i] = false;
    }
    Ok(frozen)
}

/// Five-bit cyclic register that produces parity-check bit values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PcRegister([u8; 5]);

impl PcRegister {
    /// Rotates the register; called once per index before its decision.
    #[inline]
    pub fn advance(&mut self) {
        self.0.rotate_left(1);
    }

    /// Value a parity-check bit takes at the current index.
    #[inline]
    pub fn value(&self) -> u8 {
        self.0[0]
    }

    /// Folds a decided information bit into the register.
    #[inline]
    pub fn absorb(&mut self, bit: u8) {
        self.0[0] ^= bit;
    }
}

/// A polar mother code with its frozen set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCodeConfig {
    /// Exponent, `N = 2^n`.
    pub n: usize,
    /// Bits carried, CRC included, parity-check bits excluded.
    pub k: usize,
    /// Rate-matched length.
    pub e: usize,
    pub frozen: Vec<bool>,
    /// Parity-check positions, a subset of the non-frozen positions.
    pub parity_check: Vec<bool>,
    pub direction: LinkDirection,
    pub bit_reversal: bool,
}

impl PolarCodeConfig {
    /// Builds the code for `K` bits in `E` coded bits with `n_pc` parity-check
    /// bits placed on the least reliable non-frozen positions.
    pub fn new(
        seq: &ReliabilitySequence,
        pattern: &SubblockPattern,
        k: usize,
        e: usize,
        n_pc: usize,
        direction: LinkDirection,
    ) -> Result<Self> {
        if k == 0 || e == 0 {
            return Err(Error::InvalidParameter("K and E must be positive".into()));
        }
        if k + n_pc > e {
            return Err(Error::InvalidParameter(format!(
                "K + n_pc = {} exceeds E = {e}",
                k + n_pc
            )));
        }
        let n = determine_n(e, k, direction);
        let n_len = 1 << n;
        let frozen = build_frozen_set(seq, pattern, n_len, k, n_pc, e)?;
        let mut parity_check = vec![false; n_len];
        let info_by_reliability: Vec<usize> = seq
            .restricted(n_len)
            .into_iter()
            .filter(|&i| !frozen[i])
            .collect();
        for &i in &info_by_reliability[..n_pc] {
            parity_check[i] = true;
        }
        Ok(Self {
            n,
            k,
            e,
            frozen,
            parity_check,
            direction,
            bit_reversal: false,
        })
    }

    /// A code given directly by its frozen mask, with `E = N` and no
    /// parity-check bits.
    pub fn from_frozen(frozen: Vec<bool>) -> Result<Self> {
        let n_len = frozen.len();
        if !n_len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n_len));
        }
        Ok(Self {
            n: n_len.trailing_zeros() as usize,
            k: frozen.iter().filter(|&&f| !f).count(),
            e: n_len,
            parity_check: vec![false; n_len],
            frozen,
            direction: LinkDirection::Downlink,
            bit_reversal: false,
        })
    }

    pub fn with_bit_reversal(mut self, on: bool) -> Self {
        self.bit_reversal = on;
        self
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n_pc(&self) -> usize {
        self.parity_check.iter().filter(|&&p| p).count()
    }

    pub fn mode(&self) -> RateMatchMode {
        mode_for(self.e, self.len(), self.k)
    }

    /// Positions carrying payload bits, ascending.
    pub fn info_positions(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.frozen[i] && !self.parity_check[i])
            .collect()
    }

    /// Places `bits` on the information positions, fills parity-check bits
    /// and zeros elsewhere.
    pub fn assemble_u(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.k {
            return Err(Error::DimensionMismatch {
                what: "polar information bits",
                expected: self.k,
                got: bits.len(),
            });
        }
        let mut u = vec![0u8; self.len()];
        let mut reg = PcRegister::default();
        let mut next = bits.iter();
        for (i, slot) in u.iter_mut().enumerate() {
            reg.advance();
            if self.frozen[i] {
                continue;
            }
            *slot = if self.parity_check[i] {
                reg.value()
            } else {
                let bit = next.next().copied().unwrap_or_default() & 1;
                reg.absorb(bit);
                bit
            };
        }
        Ok(u)
    }

    /// Reads the information bits back out of a decided `u`.
    pub fn extract_info(&self, u: &[u8]) -> Vec<u8> {
        self.info_positions().into_iter().map(|i| u[i]).collect()
    }

    /// Mother-code encoding of `bits`.
    pub fn encode(&self, bits: &[u8]) -> Result<Vec<u8>> {
        encode_butterfly(&self.assemble_u(bits)?, self.bit_reversal)
    }
}

pub(crate) fn bit_reverse_index(i: usize, n: usize) -> usize {
    bit_reverse(i, n)
}
