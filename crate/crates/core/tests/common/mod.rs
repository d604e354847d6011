//! Reference implementations shared by the integration tests. Each oracle is
//! written independently of the library code paths it checks.
#![allow(dead_code)]

use std::sync::OnceLock;

use nr_fec::crc::{CrcPolynomial, CRC11, CRC16, CRC24A, CRC24B, CRC6};
use nr_fec::ldpc::{LdpcChain, ParityCheckMatrix};
use nr_fec::polar::chain::{ControlChannel, PolarChainParams};
use nr_fec::polar::PolarCodeConfig;
use nr_fec::Assets;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn assets() -> &'static Assets {
    static ASSETS: OnceLock<Assets> = OnceLock::new();
    ASSETS.get_or_init(Assets::bundled)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| u8::from(rng.random::<bool>())).collect()
}

/// Fixed payload for the LDPC golden vector (A=100, G=300, rv=0).
pub fn golden_ldpc_payload() -> Vec<u8> {
    (0..100).map(|i| ((i * 7 + 3) % 5 % 2) as u8).collect()
}

pub const GOLDEN_LDPC_A100_G300: &str =
    "8c6318c6318c63103659aaf69aaf6e21499d18d47f0c33c7b155abee2fd0a4f1a2c37bdef7f0";

/// Random `(A, E)` within the link's supported range.
pub fn random_polar_params(r: &mut impl Rng, channel: ControlChannel) -> PolarChainParams {
    let (a, crc) = match channel {
        ControlChannel::Uci => {
            let a = r.random_range(1..400);
            (a, if a >= 20 { 11 } else { 6 })
        }
        _ => (r.random_range(1..=140), 24),
    };
    let k = a + crc;
    PolarChainParams::new(channel, a, r.random_range(k..(8 * k).min(8192)))
}

/// Fixed payload for the polar golden vector (DCI, A=32, E=128).
pub fn golden_polar_payload() -> Vec<u8> {
    (0..32).map(|i| ((i * 5 + 1) % 3 % 2) as u8).collect()
}

pub const GOLDEN_POLAR_DL_A32_E128: &str = "33de9dcb92688c321029c2bf726079d0";

/// Random `(A, G, rv)` for a noiseless LDPC round trip. Nonzero rv start
/// inside the parity region and skip systematic or core parity bits, so
/// they are only decodable on their own once the whole circular buffer is
/// sent.
pub fn random_ldpc_tuple(r: &mut impl Rng) -> (usize, usize, usize) {
    let a = r.random_range(8..3000);
    let rv = r.random_range(0..4);
    if rv == 0 {
        return (a, r.random_range(a + a / 4 + 40..2 * a + 100), rv);
    }
    let probe = LdpcChain::new(&assets().ldpc, a, 5 * a + 100, rv, None).unwrap();
    let n_r = probe.rate_match.n_r;
    (a, r.random_range(n_r..n_r + n_r / 2), rv)
}

/// Generator exponents written out term by term.
pub const CRC_TERMS: [(CrcPolynomial, &[u32]); 5] = [
    (CRC24A, &[24, 23, 18, 17, 14, 11, 10, 7, 6, 5, 4, 3, 1, 0]),
    (CRC24B, &[24, 23, 6, 1, 0]),
    (CRC16, &[16, 12, 5, 0]),
    (CRC11, &[11, 10, 9, 5, 0]),
    (CRC6, &[6, 5, 0]),
];

/// Schoolbook long division of `msg · x^L` by the generator given as exponents.
pub fn crc_long_division(msg: &[u8], exps: &[u32]) -> Vec<u8> {
    let degree = *exps.iter().max().unwrap() as usize;
    let mut divisor = vec![0u8; degree + 1];
    for &e in exps {
        divisor[degree - e as usize] = 1;
    }
    let mut work: Vec<u8> = msg.to_vec();
    work.extend(std::iter::repeat_n(0, degree));
    for i in 0..msg.len() {
        if work[i] == 1 {
            for (w, d) in work[i..=i + degree].iter_mut().zip(&divisor) {
                *w ^= d;
            }
        }
    }
    work[msg.len()..].to_vec()
}

/// Solves `H [s p]^T = 0` for the parity part `p` by Gaussian elimination on
/// the dense matrix, with `s` occupying the first `s.len()` columns.
/// Returns `None` if the parity sub-matrix is singular.
pub fn gf2_parity_solve(h: &[Vec<u8>], s: &[u8]) -> Option<Vec<u8>> {
    let m = h.len();
    let n = h[0].len();
    let k = s.len();
    let unknowns = n - k;
    assert_eq!(unknowns, m, "square parity part expected");
    let words = (unknowns + 1).div_ceil(64);
    let mut rows: Vec<Vec<u64>> = h
        .iter()
        .map(|row| {
            let mut bits = vec![0u64; words];
            for j in 0..unknowns {
                if row[k + j] == 1 {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            let rhs = row[..k]
                .iter()
                .zip(s)
                .fold(0u8, |acc, (&a, &b)| acc ^ (a & b));
            if rhs == 1 {
                bits[unknowns / 64] |= 1 << (unknowns % 64);
            }
            bits
        })
        .collect();
    let get = |r: &Vec<u64>, j: usize| (r[j / 64] >> (j % 64)) & 1 == 1;
    for col in 0..unknowns {
        let pivot = (col..m).find(|&r| get(&rows[r], col))?;
        rows.swap(col, pivot);
        let p = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && get(row, col) {
                for (a, b) in row.iter_mut().zip(&p) {
                    *a ^= b;
                }
            }
        }
    }
    Some(
        (0..unknowns)
            .map(|j| u8::from(get(&rows[j], unknowns)))
            .collect(),
    )
}

/// `u · G` over GF(2) for a dense generator.
pub fn dense_mul(u: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
    let n = g[0].len();
    let mut x = vec![0u8; n];
    for (ui, row) in u.iter().zip(g) {
        if *ui == 1 {
            for (xj, gj) in x.iter_mut().zip(row) {
                *xj ^= gj;
            }
        }
    }
    x
}

/// Natural-order polar transform by explicit recursion `x = [ (a⊕b)F', bF' ]`.
pub fn polar_transform_recursive(u: &[u8]) -> Vec<u8> {
    if u.len() == 1 {
        return u.to_vec();
    }
    let half = u.len() / 2;
    let a = polar_transform_recursive(&u[..half]);
    let b = polar_transform_recursive(&u[half..]);
    let mut out: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
    out.extend(b);
    out
}

/// Correlation metric `Σ (1 − 2x_i)·llr_i / 2`, larger is more likely.
pub fn correlation(x: &[u8], llr: &[f64]) -> f64 {
    x.iter()
        .zip(llr)
        .map(|(&b, &l)| if b == 0 { l / 2.0 } else { -l / 2.0 })
        .sum()
}

/// Exhaustive maximum-likelihood decoding over every information word.
/// Returns the best `u` and its correlation.
pub fn polar_ml(code: &PolarCodeConfig, llr: &[f64]) -> (Vec<u8>, f64) {
    let info: Vec<usize> = code.info_positions();
    let k = info.len();
    assert!(k <= 16, "brute force limited to small K");
    let mut best = (Vec::new(), f64::NEG_INFINITY);
    for v in 0u32..(1 << k) {
        let mut u = vec![0u8; code.len()];
        for (t, &pos) in info.iter().enumerate() {
            u[pos] = ((v >> t) & 1) as u8;
        }
        let x = polar_transform_recursive(&u);
        let c = correlation(&x, llr);
        if c > best.1 {
            best = (u, c);
        }
    }
    best
}

/// Dense `H` with an `H · w` product written out directly.
pub fn dense_syndrome(h: &[Vec<u8>], w: &[u8]) -> Vec<u8> {
    h.iter()
        .map(|row| row.iter().zip(w).fold(0u8, |acc, (&a, &b)| acc ^ (a & b)))
        .collect()
}

/// All codewords of a small code given by its dense parity-check matrix.
pub fn enumerate_codewords(pcm: &ParityCheckMatrix) -> Vec<Vec<u8>> {
    let h = pcm.to_dense().unwrap();
    let n = pcm.cols();
    // Reduced row echelon form to find free variables.
    let mut rows = h.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if let Some(p) = (r..rows.len()).find(|&i| rows[i][c] == 1) {
            rows.swap(r, p);
            let pr = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[c] == 1 {
                    for (a, b) in row.iter_mut().zip(&pr) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    assert!(free.len() <= 16);
    (0u32..(1 << free.len()))
        .map(|v| {
            let mut w = vec![0u8; n];
            for (t, &c) in free.iter().enumerate() {
                w[c] = ((v >> t) & 1) as u8;
            }
            for (i, &pc) in pivots.iter().enumerate() {
                w[pc] = free.iter().fold(0u8, |acc, &c| acc ^ (rows[i][c] & w[c]));
            }
            debug_assert!(dense_syndrome(&h, &w).iter().all(|&b| b == 0));
            w
        })
        .collect()
}
