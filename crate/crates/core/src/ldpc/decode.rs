//! Soft-decision message passing: sum-product, min-sum variants and the
//! layered schedule.

use super::graph::{adjacency, ParityCheckMatrix};
use crate::bits::hard_decision;
use crate::error::{Error, Result};

/// Clamp magnitude for channel LLRs and every internal message.
pub const SAT: f64 = 20.0;
/// Domain clamp of the φ function.
pub const PHI_MIN: f64 = 1e-9;
pub const PHI_MAX: f64 = 38.0;

/// φ(x) = −ln tanh(x/2) = ln((eˣ+1)/(eˣ−1)), evaluated on [PHI_MIN, PHI_MAX].
///
/// Non-positive inputs are clamped to `PHI_MIN`; φ is its own inverse.
pub fn phi(x: f64) -> f64 {
    let x = if x.is_nan() {
        PHI_MIN
    } else {
        x.clamp(PHI_MIN, PHI_MAX)
    };
    (2.0 / x.exp_m1()).ln_1p()
}

/// Channel or decoder soft values; positive favours bit 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    /// Saturates to ±`sat`; NaN becomes an erasure.
    pub fn saturated(values: &[f64], sat: f64) -> Self {
        Self(
            values
                .iter()
                .map(|&v| if v.is_nan() { 0.0 } else { v.clamp(-sat, sat) })
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for LlrVector {
    fn from(v: Vec<f64>) -> Self {
        Self::saturated(&v, SAT)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LdpcAlgorithm {
    Spa,
    Msa,
    Nmsa,
    Omsa,
    LayeredNmsa,
}

impl LdpcAlgorithm {
    pub fn is_layered(self) -> bool {
        matches!(self, Self::LayeredNmsa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdpcDecodeConfig {
    pub algorithm: LdpcAlgorithm,
    pub max_iter: usize,
    pub alpha: f64,
    pub beta: f64,
    pub sat: f64,
    pub early_stop: bool,
}

impl LdpcDecodeConfig {
    /// Conventional operating point for the given algorithm.
    pub fn new(algorithm: LdpcAlgorithm) -> Self {
        Self {
            algorithm,
            max_iter: if algorithm.is_layered() { 12 } else { 25 },
            alpha: 0.75,
            beta: 0.15,
            sat: SAT,
            early_stop: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha {} outside (0, 1]",
                self.alpha
            )));
        }
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta {} is negative",
                self.beta
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if !(self.sat > 0.0 && self.sat.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sat {} must be positive",
                self.sat
            )));
        }
        Ok(())
    }

    fn kernel(&self) -> CheckKernel {
        match self.algorithm {
            LdpcAlgorithm::Spa => CheckKernel::Spa,
            LdpcAlgorithm::Msa => CheckKernel::MinSum(MinSumVariant::Plain),
            LdpcAlgorithm::Nmsa | LdpcAlgorithm::LayeredNmsa => {
                CheckKernel::MinSum(MinSumVariant::Normalized(self.alpha))
            }
            LdpcAlgorithm::Omsa => CheckKernel::MinSum(MinSumVariant::Offset(self.beta)),
        }
    }
}

impl Default for LdpcDecodeConfig {
    fn default() -> Self {
        Self::new(LdpcAlgorithm::Nmsa)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub hard_bits: Vec<u8>,
    pub iterations_used: usize,
    /// Syndrome of `hard_bits` is zero.
    pub converged: bool,
    pub output_llrs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinSumVariant {
    Plain,
    Normalized(f64),
    Offset(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum CheckKernel {
    Spa,
    MinSum(MinSumVariant),
}

#[inline]
fn sign_of(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Sum-product check-node output from the extrinsic inputs `BN(j)\{i}`.
pub fn check_node_spa(incoming: &[f64]) -> f64 {
    let sign: f64 = incoming.iter().map(|&v| sign_of(v)).product();
    let sum: f64 = incoming.iter().map(|v| phi(v.abs())).sum();
    sign * phi(sum)
}

/// Min-sum family check-node output from the extrinsic inputs.
pub fn check_node_ms(incoming: &[f64], variant: MinSumVariant) -> f64 {
    let sign: f64 = incoming.iter().map(|&v| sign_of(v)).product();
    let min = incoming.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    sign * scale_min(min, variant)
}

#[inline]
fn scale_min(min: f64, variant: MinSumVariant) -> f64 {
    match variant {
        MinSumVariant::Plain => min,
        MinSumVariant::Normalized(alpha) => alpha * min,
        MinSumVariant::Offset(beta) => (min - beta).max(0.0),
    }
}

/// Edge-indexed Tanner graph: check `j` owns edges `row_ptr[j]..row_ptr[j+1]`.
struct EdgeGraph {
    row_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    /// For each variable, its edge indices.
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
    n_vars: usize,
    block_rows: usize,
    zc: usize,
}

impl EdgeGraph {
    fn new(pcm: &ParityCheckMatrix) -> Self {
        let adj = adjacency(pcm);
        let m = adj.n_checks();
        let n = adj.n_bits();
        let mut row_ptr = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::with_capacity(pcm.nnz());
        row_ptr.push(0);
        for j in 0..m {
            edge_var.extend_from_slice(adj.bn(j));
            row_ptr.push(edge_var.len());
        }
        let mut counts = vec![0usize; n + 1];
        for &v in &edge_var {
            counts[v + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let var_ptr = counts.clone();
        let mut fill = counts;
        let mut var_edges = vec![0usize; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        Self {
            row_ptr,
            edge_var,
            var_ptr,
            var_edges,
            n_vars: n,
            block_rows: pcm.n_block_rows,
            zc: pcm.zc,
        }
    }

    fn syndrome_ok(&self, bits: &[u8]) -> bool {
        self.row_ptr.windows(2).all(|w| {
            self.edge_var[w[0]..w[1]]
                .iter()
                .fold(0u8, |acc, &v| acc ^ bits[v])
                == 0
        })
    }
}

/// Writes every outgoing message of one check node into `out`.
fn update_check(
    kernel: CheckKernel,
    inputs: &[f64],
    out: &mut [f64],
    scratch: &mut Vec<f64>,
    sat: f64,
) {
    let deg = inputs.len();
    if deg == 0 {
        return;
    }
    let sign_all: f64 = inputs.iter().map(|&v| sign_of(v)).product();
    match kernel {
        CheckKernel::MinSum(variant) => {
            let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, 0);
            for (k, v) in inputs.iter().enumerate() {
                let a = v.abs();
                if a < min1 {
                    min2 = min1;
                    min1 = a;
                    arg = k;
                } else if a < min2 {
                    min2 = a;
                }
            }
            for (k, o) in out.iter_mut().enumerate() {
                let m = if k == arg { min2 } else { min1 };
                // A degree-1 check pins its bit to zero.
                *o = if m.is_finite() {
                    (sign_all * sign_of(inputs[k]) * scale_min(m, variant)).clamp(-sat, sat)
                } else {
                    sat
                };
            }
        }
        CheckKernel::Spa => {
            // Prefix/suffix sums of φ(|x|) give the exclusive sums exactly.
            scratch.clear();
            scratch.extend(inputs.iter().map(|v| phi(v.abs())));
            let mut suffix = vec![0.0; deg + 1];
            for k in (0..deg).rev() {
                suffix[k] = suffix[k + 1] + scratch[k];
            }
            let mut prefix = 0.0;
            for k in 0..deg {
                let excl = prefix + suffix[k + 1];
                out[k] = (sign_all * sign_of(inputs[k]) * phi(excl)).clamp(-sat, sat);
                prefix += scratch[k];
            }
        }
    }
}

fn check_len(llr: &LlrVector, pcm: &ParityCheckMatrix) -> Result<()> {
    if llr.len() != pcm.cols() {
        return Err(Error::DimensionMismatch {
            what: "LLR vector length",
            expected: pcm.cols(),
            got: llr.len(),
        });
    }
    Ok(())
}

/// Decodes with the schedule implied by `cfg.algorithm` (flooding unless layered).
pub fn decode(
    llr: &LlrVector,
    pcm: &ParityCheckMatrix,
    cfg: &LdpcDecodeConfig,
) -> Result<DecodeResult> {
    if cfg.algorithm.is_layered() {
        return decode_layered(llr, pcm, cfg);
    }
    cfg.validate()?;
    check_len(llr, pcm)?;
    let g = EdgeGraph::new(pcm);
    let sat = cfg.sat;
    let kernel = cfg.kernel();
    let channel: Vec<f64> = llr.as_slice().iter().map(|v| v.clamp(-sat, sat)).collect();

    let n_edges = g.edge_var.len();
    let mut v2c: Vec<f64> = g.edge_var.iter().map(|&v| channel[v]).collect();
    let mut c2v = vec![0.0; n_edges];
    let mut total = channel.clone();
    let mut bits = vec![0u8; g.n_vars];
    let mut scratch = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    for _ in 0..cfg.max_iter {
        iterations += 1;
        for w in g.row_ptr.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            update_check(kernel, &v2c[lo..hi], &mut c2v[lo..hi], &mut scratch, sat);
        }
        for i in 0..g.n_vars {
            let edges = &g.var_edges[g.var_ptr[i]..g.var_ptr[i + 1]];
            let q = channel[i] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
            for &e in edges {
                v2c[e] = (q - c2v[e]).clamp(-sat, sat);
            }
            total[i] = q.clamp(-sat, sat);
            bits[i] = hard_decision(q);
        }
        converged = g.syndrome_ok(&bits);
        if converged && cfg.early_stop {
            break;
        }
    }
    Ok(DecodeResult {
        hard_bits: bits,
        iterations_used: iterations,
        converged,
        output_llrs: total,
    })
}

/// Layered decoding: one block-row per layer, ascending, with each layer
/// reading the output LLRs refreshed by the previous one.
pub fn decode_layered(
    llr: &LlrVector,
    pcm: &ParityCheckMatrix,
    cfg: &LdpcDecodeConfig,
) -> Result<DecodeResult> {
    cfg.validate()?;
    check_len(llr, pcm)?;
    let g = EdgeGraph::new(pcm);
    let sat = cfg.sat;
    let kernel = cfg.kernel();
    let mut total: Vec<f64> = llr.as_slice().iter().map(|v| v.clamp(-sat, sat)).collect();
    let mut c2v = vec![0.0; g.edge_var.len()];
    let mut q = Vec::new();
    let mut fresh = Vec::new();
    let mut scratch = Vec::new();
    let mut bits = vec![0u8; g.n_vars];
    let mut iterations = 0;
    let mut converged = false;

    for _ in 0..cfg.max_iter {
        iterations += 1;
        for layer in 0..g.block_rows {
            for j in layer * g.zc..(layer + 1) * g.zc {
                let (lo, hi) = (g.row_ptr[j], g.row_ptr[j + 1]);
                let vars = &g.edge_var[lo..hi];
                q.clear();
                q.extend(
                    vars.iter()
                        .zip(&c2v[lo..hi])
                        .map(|(&v, &r)| (total[v] - r).clamp(-sat, sat)),
                );
                fresh.resize(q.len(), 0.0);
                update_check(kernel, &q, &mut fresh, &mut scratch, sat);
                for (k, &v) in vars.iter().enumerate() {
                    total[v] = (q[k] + fresh[k]).clamp(-sat, sat);
                }
                c2v[lo..hi].copy_from_slice(&fresh);
            }
        }
        for (b, &t) in bits.iter_mut().zip(&total) {
            *b = hard_decision(t);
        }
        converged = g.syndrome_ok(&bits);
        if converged && cfg.early_stop {
            break;
        }
    }
    Ok(DecodeResult {
        hard_bits: bits,
        iterations_used: iterations,
        converged,
        output_llrs: total,
    })
}
