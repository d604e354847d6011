//! Systematic QC-LDPC encoding of one code block.

use std::ops::Range;

use super::graph::{BaseGraphId, BlockEntry, ParityCheckMatrix};
use crate::error::{Error, Result};

/// A code-block symbol: a bit, or a filler position that is never transmitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    Filler,
}

impl Symbol {
    pub fn bit(b: u8) -> Self {
        if b & 1 == 0 {
            Self::Zero
        } else {
            Self::One
        }
    }
}

/// Encoder input of length `K`: `kr` information+CRC bits followed by filler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeBlock {
    /// Length K; filler positions hold 0.
    bits: Vec<u8>,
    kr: usize,
}

impl CodeBlock {
    /// Pads `bits` with filler up to capacity `k`.
    pub fn new(bits: &[u8], k: usize) -> Result<Self> {
        if bits.len() > k {
            return Err(Error::DimensionMismatch {
                what: "code block bits",
                expected: k,
                got: bits.len(),
            });
        }
        let mut buf = bits.iter().map(|b| b & 1).collect::<Vec<_>>();
        buf.resize(k, 0);
        Ok(Self {
            bits: buf,
            kr: bits.len(),
        })
    }

    /// Builds a block from explicit symbols; filler must form a suffix.
    pub fn from_symbols(symbols: &[Symbol]) -> Result<Self> {
        let kr = symbols
            .iter()
            .position(|&s| s == Symbol::Filler)
            .unwrap_or(symbols.len());
        if let Some(p) = symbols[kr..].iter().position(|&s| s != Symbol::Filler) {
            return Err(Error::FillerNotSuffix(kr + p));
        }
        let bits: Vec<u8> = symbols[..kr]
            .iter()
            .map(|&s| u8::from(s == Symbol::One))
            .collect();
        Self::new(&bits, symbols.len())
    }

    pub fn kr(&self) -> usize {
        self.kr
    }

    pub fn k(&self) -> usize {
        self.bits.len()
    }

    /// Information bits followed by zeros in place of filler.
    pub fn bits_with_zero_filler(&self) -> &[u8] {
        &self.bits
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        (0..self.k())
            .map(|i| {
                if i < self.kr {
                    Symbol::bit(self.bits[i])
                } else {
                    Symbol::Filler
                }
            })
            .collect()
    }
}

/// Encoder output `d` of length `N_r` (the first two block-columns removed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordLdpc {
    /// Filler positions hold 0.
    bits: Vec<u8>,
    filler: Range<usize>,
}

impl CodewordLdpc {
    pub fn new(bits: Vec<u8>, filler: Range<usize>) -> Self {
        Self { bits, filler }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn filler(&self) -> Range<usize> {
        self.filler.clone()
    }

    pub fn is_filler(&self, i: usize) -> bool {
        self.filler.contains(&i)
    }

    pub fn bits_with_zero_filler(&self) -> &[u8] {
        &self.bits
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.bits
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                if self.is_filler(i) {
                    Symbol::Filler
                } else {
                    Symbol::bit(b)
                }
            })
            .collect()
    }
}

/// `out ^= P_s · x`, where `P_s` is the identity shifted right by `s`.
#[inline]
fn accumulate_circulant(out: &mut [u8], x: &[u8], shift: usize) {
    let z = out.len();
    let (head, tail) = x.split_at(shift);
    // (P_s x)[i] = x[(i + s) mod z]
    for (o, v) in out.iter_mut().zip(tail.iter().chain(head)) {
        *o ^= v;
    }
    debug_assert_eq!(x.len(), z);
}

/// Solves `P_s · w = y` for `w`.
#[inline]
fn invert_circulant(y: &[u8], shift: usize) -> Vec<u8> {
    let z = y.len();
    let mut w = vec![0u8; z];
    for (i, &v) in y.iter().enumerate() {
        w[(i + shift) % z] = v;
    }
    w
}

fn check_encoder_dims(k: usize, pcm: &ParityCheckMatrix, bg: BaseGraphId) -> Result<()> {
    if pcm.n_block_cols != bg.cols() || pcm.n_block_rows != bg.rows() {
        return Err(Error::DimensionMismatch {
            what: "parity-check block columns",
            expected: bg.cols(),
            got: pcm.n_block_cols,
        });
    }
    let expected = bg.kb_max() * pcm.zc;
    if k != expected {
        return Err(Error::DimensionMismatch {
            what: "code block capacity K",
            expected,
            got: k,
        });
    }
    Ok(())
}

/// Returns the full systematic word `[c w]` of length `cols·Zc`, filler as 0.
///
/// Core parity: summing the four core block-rows cancels the identity blocks
/// of the double diagonal and leaves a single circulant on the first parity
/// block; the remaining core blocks follow by back-substitution. Each
/// extension row has one identity parity block, solved directly.
pub fn encode_systematic(
    block: &CodeBlock,
    pcm: &ParityCheckMatrix,
    bg: BaseGraphId,
) -> Result<Vec<u8>> {
    check_encoder_dims(block.k(), pcm, bg)?;
    let z = pcm.zc;
    let kb = bg.kb_max();
    let n_cols = pcm.n_block_cols;
    let mut word = vec![0u8; n_cols * z];
    word[..kb * z].copy_from_slice(block.bits_with_zero_filler());

    // λ_r: contribution of the systematic part to each block row.
    let lambda: Vec<Vec<u8>> = (0..pcm.n_block_rows)
        .map(|r| {
            let mut acc = vec![0u8; z];
            for e in pcm.block_row(r).iter().filter(|e| e.col < kb) {
                accumulate_circulant(&mut acc, &word[e.col * z..(e.col + 1) * z], e.shift);
            }
            acc
        })
        .collect();

    let core_cols = kb..kb + 4;
    let core_parity = |r: usize| -> Vec<BlockEntry> {
        pcm.block_row(r)
            .iter()
            .copied()
            .filter(|e| core_cols.contains(&e.col))
            .collect()
    };

    // First core parity block.
    let mut sum = vec![0u8; z];
    for l in &lambda[..4] {
        crate::bits::xor_into(&mut sum, l);
    }
    let mut first_col_shifts: Vec<usize> = (0..4)
        .filter_map(|r| {
            core_parity(r)
                .into_iter()
                .find(|e| e.col == kb)
                .map(|e| e.shift)
        })
        .collect();
    first_col_shifts.sort_unstable();
    let mut odd = Vec::new();
    for s in first_col_shifts {
        if odd.last() == Some(&s) {
            odd.pop();
        } else {
            odd.push(s);
        }
    }
    let [s_star] = odd[..] else {
        return Err(Error::Structure(format!(
            "core parity column does not reduce to one circulant at Zc={z}"
        )));
    };
    let mut known = [false; 4];
    word[kb * z..(kb + 1) * z].copy_from_slice(&invert_circulant(&sum, s_star));
    known[0] = true;

    // Back-substitute through rows with exactly one unknown core block.
    while known.iter().any(|k| !k) {
        let mut progressed = false;
        for r in 0..4 {
            let entries = core_parity(r);
            let unknown: Vec<&BlockEntry> = entries.iter().filter(|e| !known[e.col - kb]).collect();
            if unknown.len() != 1 {
                continue;
            }
            let target = *unknown[0];
            let mut rhs = lambda[r].clone();
            for e in entries.iter().filter(|e| e.col != target.col) {
                accumulate_circulant(&mut rhs, &word[e.col * z..(e.col + 1) * z], e.shift);
            }
            let w = invert_circulant(&rhs, target.shift);
            word[target.col * z..(target.col + 1) * z].copy_from_slice(&w);
            known[target.col - kb] = true;
            progressed = true;
        }
        if !progressed {
            return Err(Error::Structure(
                "core parity system is not triangular".into(),
            ));
        }
    }

    // Extension rows: identity on the diagonal block.
    for r in 4..pcm.n_block_rows {
        let mut acc = lambda[r].clone();
        for e in pcm
            .block_row(r)
            .iter()
            .filter(|e| core_cols.contains(&e.col))
        {
            accumulate_circulant(&mut acc, &word[e.col * z..(e.col + 1) * z], e.shift);
        }
        let col = kb + r;
        word[col * z..(col + 1) * z].copy_from_slice(&acc);
    }
    Ok(word)
}

/// Encodes one code block into `d` (length 66·Zc or 50·Zc).
pub fn encode(block: &CodeBlock, pcm: &ParityCheckMatrix, bg: BaseGraphId) -> Result<CodewordLdpc> {
    let word = encode_systematic(block, pcm, bg)?;
    let two_z = 2 * pcm.zc;
    let filler = block.kr().max(two_z) - two_z..block.k().max(two_z) - two_z;
    Ok(CodewordLdpc::new(word[two_z..].to_vec(), filler))
}

/// `H · word` over GF(2).
pub fn syndrome(word: &[u8], pcm: &ParityCheckMatrix) -> Result<Vec<u8>> {
    if word.len() != pcm.cols() {
        return Err(Error::DimensionMismatch {
            what: "word length",
            expected: pcm.cols(),
            got: word.len(),
        });
    }
    let z = pcm.zc;
    let mut s = vec![0u8; pcm.rows()];
    for e in pcm.entries() {
        accumulate_circulant(
            &mut s[e.row * z..(e.row + 1) * z],
            &word[e.col * z..(e.col + 1) * z],
            e.shift,
        );
    }
    Ok(s)
}

/// True iff every parity check is satisfied.
pub fn is_codeword(word: &[u8], pcm: &ParityCheckMatrix) -> Result<bool> {
    Ok(syndrome(word, pcm)?.iter().all(|&b| b == 0))
}
