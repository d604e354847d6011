//! Successive-cancellation decoding: SC, SCL and CRC-aided SCL.

use super::construct::{bit_reverse_index, PcRegister, PolarCodeConfig};
use crate::bits::hard_decision;
use crate::crc::{crc_check, CrcPolynomial};
use crate::error::{Error, Result};

/// Default list size for SCL decoding.
pub const DEFAULT_LIST_SIZE: usize = 8;

/// Check-node combination of two LLRs.
///
/// The exact form equals `2·atanh(tanh(a/2)·tanh(b/2))`, evaluated through
/// `min(|a|,|b|) + ln(1+e^{-(|a|+|b|)}) - ln(1+e^{-||a|-|b||})`, which needs no
/// domain clamping.
#[inline]
pub fn f_func(a: f64, b: f64, approx: bool) -> f64 {
    let (ma, mb) = (a.abs(), b.abs());
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let min = ma.min(mb);
    if approx {
        sign * min
    } else {
        sign * (min + (-(ma + mb)).exp().ln_1p() - (-(ma - mb).abs()).exp().ln_1p())
    }
}

/// Variable-node combination given the left partial sum `bit`.
#[inline]
pub fn g_func(a: f64, b: f64, bit: u8) -> f64 {
    if bit & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// Partial sums passed upward from two sibling decisions.
#[inline]
pub fn partial_sums(b3: u8, b4: u8) -> (u8, u8) {
    (b3 ^ b4, b4)
}

/// Metric increment for deciding `bit` against leaf LLR `llr`.
#[inline]
pub fn path_metric_delta(bit: u8, llr: f64) -> f64 {
    let s = if bit & 1 == 0 { llr } else { -llr };
    (-s).max(0.0) + (-s.abs()).exp().ln_1p()
}

#[inline]
pub fn path_metric_update(pm: f64, bit: u8, llr: f64) -> f64 {
    pm + path_metric_delta(bit, llr)
}

/// Channel LLRs in natural index order.
fn natural_llrs(llr: &[f64], cfg: &PolarCodeConfig) -> Result<Vec<f64>> {
    let n_len = cfg.len();
    if !llr.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(llr.len()));
    }
    if llr.len() != n_len {
        return Err(Error::DimensionMismatch {
            what: "polar LLR length",
            expected: n_len,
            got: llr.len(),
        });
    }
    Ok(if cfg.bit_reversal {
        (0..n_len)
            .map(|j| llr[bit_reverse_index(j, cfg.n)])
            .collect()
    } else {
        llr.to_vec()
    })
}

struct ScState<'a> {
    cfg: &'a PolarCodeConfig,
    approx: bool,
    reg: PcRegister,
    u: Vec<u8>,
}

fn sc_node(alpha: &[f64], first: usize, st: &mut ScState) -> Vec<u8> {
    if alpha.len() == 1 {
        st.reg.advance();
        let bit = if st.cfg.frozen[first] {
            0
        } else {
            if st.cfg.parity_check[first] {
                st.reg.value()
            } else {
                let b = hard_decision(alpha[0]);
                st.reg.absorb(b);
                b
            }
        };
        st.u[first] = bit;
        return vec![bit];
    }
    let half = alpha.len() / 2;
    let (top, bottom) = alpha.split_at(half);
    let left: Vec<f64> = top
        .iter()
        .zip(bottom)
        .map(|(&a, &b)| f_func(a, b, st.approx))
        .collect();
    let beta_a = sc_node(&left, first, st);
    let right: Vec<f64> = top
        .iter()
        .zip(bottom)
        .zip(&beta_a)
        .map(|((&a, &b), &s)| g_func(a, b, s))
        .collect();
    let beta_b = sc_node(&right, first + half, st);
    let mut beta = Vec::with_capacity(alpha.len());
    beta.extend(
        beta_a
            .iter()
            .zip(&beta_b)
            .map(|(&x, &y)| partial_sums(x, y).0),
    );
    beta.extend_from_slice(&beta_b);
    beta
}

/// SC decoding; returns the decided input vector `û` of length `N`.
pub fn decode_sc(llr: &[f64], cfg: &PolarCodeConfig, approx: bool) -> Result<Vec<u8>> {
    let alpha = natural_llrs(llr, cfg)?;
    let mut st = ScState {
        cfg,
        approx,
        reg: PcRegister::default(),
        u: vec![0; cfg.len()],
    };
    sc_node(&alpha, 0, &mut st);
    Ok(st.u)
}

/// One surviving SCL candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct ScListPath {
    pub u_hat: Vec<u8>,
    pub pm: f64,
    /// Decision-level LLR seen at every index.
    pub leaf_llrs: Vec<f64>,
}

/// A candidate `(metric, parent position, bit)` considered at a prune step.
pub type Candidate = (f64, usize, u8);

/// Snapshot of one SCL prune step.
#[derive(Debug, Clone, PartialEq)]
pub struct PruneStep {
    pub index: usize,
    pub candidates: Vec<Candidate>,
    pub survivors: Vec<Candidate>,
}

/// Per-path SC memory. LLRs of depth `d` live at `alpha[2N - 2(N>>d)..]`,
/// left-child partial sums of depth `d >= 1` at `beta[N - 2(N>>d)..]`.
#[derive(Clone)]
struct Path {
    alpha: Vec<f64>,
    beta: Vec<u8>,
    u: Vec<u8>,
    leaf: Vec<f64>,
    pm: f64,
    reg: PcRegister,
}

struct Layout {
    n: usize,
    len: usize,
}

impl Layout {
    fn alpha_off(&self, d: usize) -> usize {
        2 * self.len - 2 * (self.len >> d)
    }

    fn beta_off(&self, d: usize) -> usize {
        self.len - 2 * (self.len >> d)
    }

    /// Computes the leaf LLR for index `i` from the memory left by `i - 1`.
    fn descend(&self, p: &mut Path, i: usize, approx: bool) -> f64 {
        let start = if i == 0 {
            1
        } else {
            let d = self.n - i.trailing_zeros() as usize;
            let m = self.len >> d;
            let (lo, hi) = p.alpha.split_at_mut(self.alpha_off(d));
            let parent = &lo[self.alpha_off(d - 1)..self.alpha_off(d - 1) + 2 * m];
            let left = &p.beta[self.beta_off(d)..self.beta_off(d) + m];
            for j in 0..m {
                hi[j] = g_func(parent[j], parent[j + m], left[j]);
            }
            d + 1
        };
        for d in start..=self.n {
            let m = self.len >> d;
            let (lo, hi) = p.alpha.split_at_mut(self.alpha_off(d));
            let parent = &lo[self.alpha_off(d - 1)..self.alpha_off(d - 1) + 2 * m];
            for j in 0..m {
                hi[j] = f_func(parent[j], parent[j + m], approx);
            }
        }
        p.alpha[self.alpha_off(self.n)]
    }

    /// Records decision `bit` at leaf `i` and combines finished subtrees.
    fn ascend(&self, p: &mut Path, i: usize, bit: u8) {
        let mut cur = vec![bit];
        let mut d = self.n;
        let mut idx = i;
        while d > 0 && idx & 1 == 1 {
            let m = cur.len();
            let off = self.beta_off(d);
            let mut next = Vec::with_capacity(2 * m);
            next.extend(
                p.beta[off..off + m]
                    .iter()
                    .zip(&cur)
                    .map(|(&a, &b)| partial_sums(a, b).0),
            );
            next.extend_from_slice(&cur);
            cur = next;
            d -= 1;
            idx >>= 1;
        }
        if d > 0 {
            let off = self.beta_off(d);
            p.beta[off..off + cur.len()].copy_from_slice(&cur);
        }
    }
}

/// SCL decoding; returns surviving paths sorted by ascending metric.
pub fn decode_scl(
    llr: &[f64],
    cfg: &PolarCodeConfig,
    list_size: usize,
    approx: bool,
) -> Result<Vec<ScListPath>> {
    decode_scl_traced(llr, cfg, list_size, approx, |_| {})
}

/// [`decode_scl`] reporting every prune step to `observer`.
pub fn decode_scl_traced(
    llr: &[f64],
    cfg: &PolarCodeConfig,
    list_size: usize,
    approx: bool,
    mut observer: impl FnMut(&PruneStep),
) -> Result<Vec<ScListPath>> {
    if list_size == 0 {
        return Err(Error::InvalidParameter(
            "list size must be at least 1".into(),
        ));
    }
    let channel = natural_llrs(llr, cfg)?;
    let n_len = cfg.len();
    let layout = Layout {
        n: cfg.n,
        len: n_len,
    };
    let mut root = Path {
        alpha: vec![0.0; 2 * n_len],
        beta: vec![0; n_len],
        u: vec![0; n_len],
        leaf: vec![0.0; n_len],
        pm: 0.0,
        reg: PcRegister::default(),
    };
    root.alpha[..n_len].copy_from_slice(&channel);
    let mut paths = vec![root];

    for i in 0..n_len {
        let mut leaves = Vec::with_capacity(paths.len());
        for p in paths.iter_mut() {
            let l = layout.descend(p, i, approx);
            p.leaf[i] = l;
            p.reg.advance();
            leaves.push(l);
        }
        if cfg.frozen[i] || cfg.parity_check[i] {
            for (p, &l) in paths.iter_mut().zip(&leaves) {
                let bit = if cfg.frozen[i] { 0 } else { p.reg.value() };
                p.pm = path_metric_update(p.pm, bit, l);
                p.u[i] = bit;
                layout.ascend(p, i, bit);
            }
            continue;
        }

        let mut candidates: Vec<Candidate> = Vec::with_capacity(2 * paths.len());
        for (idx, (p, &l)) in paths.iter().zip(&leaves).enumerate() {
            for bit in [0u8, 1] {
                candidates.push((path_metric_update(p.pm, bit, l), idx, bit));
            }
        }
        let mut order = candidates.clone();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        order.truncate(list_size);
        observer(&PruneStep {
            index: i,
            candidates,
            survivors: order.clone(),
        });

        let mut uses = vec![0usize; paths.len()];
        for &(_, parent, _) in &order {
            uses[parent] += 1;
        }
        let mut pool: Vec<Option<Path>> = paths.into_iter().map(Some).collect();
        let mut next = Vec::with_capacity(order.len());
        for (pm, parent, bit) in order {
            uses[parent] -= 1;
            let mut p = if uses[parent] == 0 {
                pool[parent].take().expect("path consumed once")
            } else {
                pool[parent].clone().expect("path still pooled")
            };
            p.pm = pm;
            p.u[i] = bit;
            p.reg.absorb(bit);
            layout.ascend(&mut p, i, bit);
            next.push(p);
        }
        paths = next;
    }

    let mut out: Vec<ScListPath> = paths
        .into_iter()
        .map(|p| ScListPath {
            u_hat: p.u,
            pm: p.pm,
            leaf_llrs: p.leaf,
        })
        .collect();
    out.sort_by(|a, b| a.pm.total_cmp(&b.pm));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaSclOutcome {
    pub u_hat: Vec<u8>,
    /// Information bits (payload followed by CRC) of the selected path.
    pub info: Vec<u8>,
    /// Rank of the selected path in the metric-sorted list.
    pub index: usize,
    pub crc_ok: bool,
}

/// CRC-aided selection with a caller-supplied validity check on the
/// extracted information bits.
pub fn decode_ca_scl_with(
    llr: &[f64],
    cfg: &PolarCodeConfig,
    list_size: usize,
    approx: bool,
    mut check: impl FnMut(&[u8]) -> bool,
) -> Result<CaSclOutcome> {
    let paths = decode_scl(llr, cfg, list_size, approx)?;
    let infos: Vec<Vec<u8>> = paths.iter().map(|p| cfg.extract_info(&p.u_hat)).collect();
    let (index, crc_ok) = infos
        .iter()
        .position(|info| check(info))
        .map_or((0, false), |i| (i, true));
    Ok(CaSclOutcome {
        u_hat: paths[index].u_hat.clone(),
        info: infos[index].clone(),
        index,
        crc_ok,
    })
}

pub fn decode_ca_scl(
    llr: &[f64],
    cfg: &PolarCodeConfig,
    list_size: usize,
    crc: CrcPolynomial,
    approx: bool,
) -> Result<CaSclOutcome> {
    decode_ca_scl_with(llr, cfg, list_size, approx, |info| {
        crc_check(info, crc).unwrap_or(false)
    })
}
