mod common;

use common::{assets, enumerate_codewords, random_bits, rng};
use nr_fec::ldpc::codec::encode_systematic;
use nr_fec::ldpc::decode::{check_node_ms, check_node_spa, phi, MinSumVariant, SAT};
use nr_fec::ldpc::{
    decode, expand, BaseGraphId, CodeBlock, LdpcAlgorithm, LdpcDecodeConfig, LiftingConfig,
    LlrVector, ParityCheckMatrix,
};
use proptest::prelude::*;

const ALL: [LdpcAlgorithm; 5] = [
    LdpcAlgorithm::Spa,
    LdpcAlgorithm::Msa,
    LdpcAlgorithm::Nmsa,
    LdpcAlgorithm::Omsa,
    LdpcAlgorithm::LayeredNmsa,
];

fn noiseless(word: &[u8]) -> LlrVector {
    LlrVector::from(
        word.iter()
            .map(|&b| if b == 0 { SAT } else { -SAT })
            .collect::<Vec<_>>(),
    )
}

#[test]
fn noiseless_converges_in_one_iteration() {
    let mut r = rng(31);
    for bg in [BaseGraphId::Bg1, BaseGraphId::Bg2] {
        let zc = 24;
        let pcm = expand(assets().ldpc.graph(bg), LiftingConfig::for_zc(zc).unwrap());
        let k = bg.kb_max() * zc;
        let word = encode_systematic(
            &CodeBlock::new(&random_bits(&mut r, k), k).unwrap(),
            &pcm,
            bg,
        )
        .unwrap();
        for alg in ALL {
            let res = decode(&noiseless(&word), &pcm, &LdpcDecodeConfig::new(alg)).unwrap();
            assert!(res.converged, "{alg:?}");
            assert_eq!(res.iterations_used, 1, "{alg:?}");
            assert_eq!(res.hard_bits, word, "{alg:?}");
        }
    }
}

#[test]
fn single_iteration_budget_runs_one_sweep() {
    let pcm = expand(
        assets().ldpc.graph(BaseGraphId::Bg2),
        LiftingConfig::for_zc(4).unwrap(),
    );
    let mut llr = vec![1.0; pcm.cols()];
    llr[3] = -0.5;
    for alg in [LdpcAlgorithm::Nmsa, LdpcAlgorithm::LayeredNmsa] {
        let cfg = LdpcDecodeConfig {
            max_iter: 1,
            ..LdpcDecodeConfig::new(alg)
        };
        let res = decode(&LlrVector::from(llr.clone()), &pcm, &cfg).unwrap();
        assert_eq!(res.iterations_used, 1);
    }
}

#[test]
fn spa_kernel_closed_forms() {
    let v = [2.0, -3.0, 1.5];
    let phi_form = -phi(v.iter().map(|x: &f64| phi(x.abs())).sum());
    let tanh_form = 2.0
        * v.iter()
            .map(|x: &f64| (x / 2.0).tanh())
            .product::<f64>()
            .atanh();
    let out = check_node_spa(&v);
    assert!((out - phi_form).abs() < 1e-6);
    assert!((out - tanh_form).abs() < 1e-6);
    assert!(check_node_spa(&[0.0, 4.0]).abs() < 1e-6);
}

#[test]
fn min_sum_kernels() {
    let v = [2.0, -3.0, 1.5];
    assert_eq!(check_node_ms(&v, MinSumVariant::Plain), -1.5);
    assert!((check_node_ms(&v, MinSumVariant::Normalized(0.75)) + 1.125).abs() < 1e-12);
    assert_eq!(check_node_ms(&[0.5, 0.2], MinSumVariant::Offset(0.3)), 0.0);
}

/// The three-row toy base graph lifted by 4.
fn toy_code() -> ParityCheckMatrix {
    let base = vec![
        vec![2, -1, 1, 3, 0, -1],
        vec![1, 0, -1, 0, 0, 0],
        vec![-1, 3, 2, 1, -1, 0],
    ];
    ParityCheckMatrix::from_base(&base, 4).unwrap()
}

/// Exhaustive 1- and 2-bit error patterns on the toy code at saturated
/// magnitude. Every single error is corrected; whenever the decoder reports
/// convergence on a pattern that ML decodes uniquely, it returns the ML word.
#[test]
fn spa_on_toy_code_never_miscorrects() {
    let pcm = toy_code();
    let n = pcm.cols();
    let codewords = enumerate_codewords(&pcm);
    let cfg = LdpcDecodeConfig {
        max_iter: 50,
        ..LdpcDecodeConfig::new(LdpcAlgorithm::Spa)
    };
    let (mut unique, mut corrected) = (0, 0);
    for i in 0..n {
        for j in i..n {
            let mut received = vec![0u8; n];
            received[i] = 1;
            received[j] = 1;
            let errors = if i == j { 1 } else { 2 };
            let dist: Vec<usize> = codewords
                .iter()
                .map(|c| c.iter().zip(&received).filter(|(a, b)| a != b).count())
                .collect();
            let best = *dist.iter().min().unwrap();
            if best != errors || dist.iter().filter(|&&d| d == best).count() != 1 {
                continue;
            }
            unique += 1;
            let res = decode(&noiseless(&received), &pcm, &cfg).unwrap();
            let ok = res.hard_bits.iter().all(|&b| b == 0);
            if errors == 1 {
                assert!(ok, "single error at {i} not corrected");
            }
            if res.converged {
                assert!(ok, "pattern ({i}, {j}) miscorrected");
            }
            corrected += usize::from(ok);
        }
    }
    assert_eq!(unique, 276);
    assert!(corrected >= 220, "corrected {corrected} of {unique}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn phi_is_an_involution(x in 1e-4f64..15.0) {
        prop_assert!((phi(phi(x)) - x).abs() < 1e-9 * x.max(1.0));
    }

    #[test]
    fn min_sum_dominates_spa_magnitude(v in prop::collection::vec(-10.0f64..10.0, 2..8)) {
        let spa = check_node_spa(&v);
        let ms = check_node_ms(&v, MinSumVariant::Plain);
        prop_assert!(spa.abs() <= ms.abs() + 1e-9);
        if spa != 0.0 {
            prop_assert_eq!(spa.signum(), ms.signum());
        }
    }
}
