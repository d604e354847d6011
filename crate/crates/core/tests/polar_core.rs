mod common;

use common::{assets, dense_mul, polar_transform_recursive, random_bits, rng};
use nr_fec::polar::construct::{
    build_frozen_set, determine_n, encode_butterfly, kron_generator, mode_for, LinkDirection,
    PolarCodeConfig, RateMatchMode, ReliabilitySequence, SubblockPattern,
};
use nr_fec::Error;
use proptest::prelude::*;
use rand::Rng;

const G8: [[u8; 8]; 8] = [
    [1, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0],
    [1, 1, 0, 0, 1, 1, 0, 0],
    [1, 0, 1, 0, 1, 0, 1, 0],
    [1, 1, 1, 1, 1, 1, 1, 1],
];

fn rev(i: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| acc | (((i >> b) & 1) << (n - 1 - b)))
}

fn as_bits(v: usize, n: usize) -> Vec<u8> {
    (0..n).map(|t| ((v >> t) & 1) as u8).collect()
}

#[test]
fn generator_small_cases() {
    let g8 = kron_generator(3, false).unwrap();
    for (row, want) in g8.iter().zip(G8) {
        assert_eq!(row.as_slice(), want.as_slice());
    }
    assert_eq!(
        kron_generator(1, false).unwrap(),
        vec![vec![1, 0], vec![1, 1]]
    );
    for n in 0..=10 {
        let g = kron_generator(n, false).unwrap();
        assert!(g.last().unwrap().iter().all(|&b| b == 1));
    }
    assert!(matches!(
        kron_generator(11, false),
        Err(Error::TestSupportBound(_))
    ));
}

#[test]
fn butterfly_matches_g8_exhaustively() {
    let g8: Vec<Vec<u8>> = G8.iter().map(|r| r.to_vec()).collect();
    for v in 0..256 {
        let u = as_bits(v, 8);
        assert_eq!(encode_butterfly(&u, false).unwrap(), dense_mul(&u, &g8));
    }
    let mut u = vec![0u8; 8];
    u[7] = 1;
    assert_eq!(encode_butterfly(&u, false).unwrap(), vec![1; 8]);
    assert_eq!(encode_butterfly(&[0; 8], false).unwrap(), vec![0; 8]);
    assert_eq!(
        encode_butterfly(&[0; 12], false),
        Err(Error::NotPowerOfTwo(12))
    );
}

#[test]
fn last_coded_bit_is_last_input_bit() {
    for v in 0..256 {
        let u = as_bits(v, 8);
        assert_eq!(encode_butterfly(&u, false).unwrap()[7], u[7]);
    }
}

#[test]
fn butterfly_is_an_involution_at_1024() {
    let mut r = rng(51);
    for _ in 0..1000 {
        let u = random_bits(&mut r, 1024);
        let x = encode_butterfly(&u, false).unwrap();
        assert_eq!(x, polar_transform_recursive(&u));
        assert_eq!(encode_butterfly(&x, false).unwrap(), u);
    }
}

#[test]
fn bit_reversal_composes_with_natural_order() {
    for v in 0..256 {
        let u = as_bits(v, 8);
        let permuted: Vec<u8> = (0..8).map(|j| u[rev(j, 3)]).collect();
        assert_eq!(
            encode_butterfly(&u, true).unwrap(),
            encode_butterfly(&permuted, false).unwrap()
        );
    }
    let mut r = rng(52);
    for n in 1..=6 {
        let g = kron_generator(n, true).unwrap();
        for _ in 0..50 {
            let u = random_bits(&mut r, 1 << n);
            assert_eq!(encode_butterfly(&u, true).unwrap(), dense_mul(&u, &g));
        }
    }
}

#[test]
fn mother_code_length_examples() {
    assert_eq!(determine_n(100, 30, LinkDirection::Downlink), 7);
    assert_eq!(determine_n(60, 20, LinkDirection::Downlink), 6);
    assert_eq!(determine_n(36, 10, LinkDirection::Downlink), 5);
    assert_eq!(determine_n(8192, 1000, LinkDirection::Downlink), 9);
    assert_eq!(determine_n(8192, 1000, LinkDirection::Uplink), 10);
}

/// Floating-point evaluation of the mother-code bound.
fn n_oracle(e: usize, k: usize, n_max: usize) -> usize {
    let c = (e as f64).log2().ceil() as usize;
    let n1 = if (e as f64) <= 1.125 * 2f64.powi(c as i32 - 1) && (k as f64) / (e as f64) < 0.5625 {
        c - 1
    } else {
        c
    };
    let n2 = ((k as f64) * 8.0).log2().ceil() as usize;
    n1.min(n2).min(n_max).max(5)
}

#[test]
fn frozen_set_examples() {
    let a = assets();
    let sb = &a.patterns.subblock;
    // Repetition: top K of the restricted sequence.
    let mask = build_frozen_set(&a.reliability, sb, 64, 20, 0, 100).unwrap();
    let top: Vec<usize> = a.reliability.restricted(64)[64 - 20..].to_vec();
    for (i, &f) in mask.iter().enumerate() {
        assert_eq!(!f, top.contains(&i));
    }
    assert!(build_frozen_set(&a.reliability, sb, 32, 0, 0, 32).is_err());
    assert!(matches!(
        build_frozen_set(&a.reliability, sb, 32, 30, 0, 16),
        Err(Error::OverFrozen { .. })
    ));

    let code =
        PolarCodeConfig::new(&a.reliability, sb, 16, 32, 0, LinkDirection::Downlink).unwrap();
    let mask: String = code
        .frozen
        .iter()
        .map(|&f| if f { '1' } else { '0' })
        .collect();
    assert_eq!(mask, GOLDEN_N32_K16);
}

const GOLDEN_N32_K16: &str = "11111110111010001110100010000000";

#[test]
fn bhattacharyya_fallback_is_a_permutation() {
    let seq = ReliabilitySequence::bhattacharyya(6);
    let mut v = seq.as_slice().to_vec();
    v.sort_unstable();
    assert_eq!(v, (0..64).collect::<Vec<_>>());
    // Index 0 is the worst channel, N-1 the best.
    assert_eq!(seq.as_slice()[0], 0);
    assert_eq!(*seq.as_slice().last().unwrap(), 63);
}

#[test]
fn shortened_positions_carry_zeros() {
    let a = assets();
    let mut r = rng(53);
    let mut checked = 0;
    for _ in 0..200 {
        let e = r.random_range(40..1000);
        let k = r.random_range(1..e / 2);
        let Ok(code) = PolarCodeConfig::new(
            &a.reliability,
            &a.patterns.subblock,
            k,
            e,
            0,
            LinkDirection::Uplink,
        ) else {
            continue;
        };
        if code.mode() != RateMatchMode::Shorten {
            continue;
        }
        let x = code.encode(&random_bits(&mut r, k)).unwrap();
        let n_len = code.len();
        for n in e..n_len {
            assert_eq!(x[a.patterns.subblock.source(n, n_len)], 0, "e={e} k={k}");
        }
        checked += 1;
    }
    assert!(checked > 10);
}

#[test]
fn mode_selection() {
    assert_eq!(mode_for(128, 128, 10), RateMatchMode::Repeat);
    assert_eq!(mode_for(100, 128, 30), RateMatchMode::Puncture);
    assert_eq!(mode_for(100, 128, 80), RateMatchMode::Shorten);
    let _ = SubblockPattern::identity();
}

proptest! {
    #[test]
    fn determine_n_matches_float_formula(e in 1usize..8193, k_frac in 0.0f64..1.0, ul in any::<bool>()) {
        let k = ((e as f64 * k_frac) as usize).max(1);
        let dir = if ul { LinkDirection::Uplink } else { LinkDirection::Downlink };
        prop_assert_eq!(determine_n(e, k, dir), n_oracle(e, k, dir.n_max()));
    }

    #[test]
    fn frozen_count_and_pc_placement(e in 32usize..2000, k_frac in 0.05f64..0.9, n_pc in 0usize..4) {
        let a = assets();
        let k = ((e as f64 * k_frac) as usize).clamp(1, e - n_pc);
        let code = match PolarCodeConfig::new(&a.reliability, &a.patterns.subblock, k, e, n_pc, LinkDirection::Uplink) {
            Ok(c) => c,
            Err(Error::OverFrozen { .. }) => return Ok(()),
            Err(other) => return Err(TestCaseError::fail(other.to_string())),
        };
        prop_assert_eq!(code.frozen.iter().filter(|&&f| f).count(), code.len() - k - n_pc);
        prop_assert_eq!(code.n_pc(), n_pc);
        prop_assert_eq!(code.info_positions().len(), k);
        let info_rel: Vec<usize> = a.reliability.restricted(code.len()).into_iter().filter(|&i| !code.frozen[i]).collect();
        for &i in &info_rel[..n_pc] {
            prop_assert!(code.parity_check[i]);
        }
    }
}
