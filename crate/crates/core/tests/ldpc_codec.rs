mod common;

use rand::Rng;

use common::{assets, dense_syndrome, gf2_parity_solve, random_bits, rng};
use nr_fec::ldpc::codec::{encode_systematic, is_codeword};
use nr_fec::ldpc::graph::{adjacency, parse_ldpc_tables, LIFTING_SETS};
use nr_fec::ldpc::{
    encode, expand, syndrome, BaseGraphId, CodeBlock, LiftingConfig, ParityCheckMatrix,
};
use nr_fec::Error;
use proptest::prelude::*;

fn block(r: &mut impl Rng, bg: BaseGraphId, zc: usize, kr: usize) -> CodeBlock {
    CodeBlock::new(&random_bits(r, kr), bg.kb_max() * zc).unwrap()
}

#[test]
fn bundled_graph_sizes() {
    let t = &assets().ldpc;
    assert_eq!(t.bg1.nnz(), 316);
    assert_eq!(t.bg2.nnz(), 197);
}

#[test]
fn asset_rejects_bad_shift_and_duplicates() {
    let bad_shift = "bg,row,col,ils,shift\n1,0,0,0,384\n";
    assert!(matches!(
        parse_ldpc_tables(bad_shift),
        Err(Error::ShiftOutOfRange { shift: 384, .. })
    ));
    let dup = "bg,row,col,ils,shift\n1,0,0,0,3\n1,0,0,0,4\n";
    assert!(matches!(
        parse_ldpc_tables(dup),
        Err(Error::DuplicateEntry { .. })
    ));
}

#[test]
fn all_zero_block_encodes_to_zero() {
    for bg in [BaseGraphId::Bg1, BaseGraphId::Bg2] {
        let lifting = LiftingConfig::for_zc(13).unwrap();
        let pcm = expand(assets().ldpc.graph(bg), lifting);
        let cw = encode(&CodeBlock::new(&[], bg.kb_max() * 13).unwrap(), &pcm, bg).unwrap();
        assert!(cw.bits_with_zero_filler().iter().all(|&b| b == 0));
    }
}

#[test]
fn syndrome_zero_for_random_blocks() {
    let mut r = rng(21);
    for bg in [BaseGraphId::Bg1, BaseGraphId::Bg2] {
        for zc in [2, 13, 40, 208, 384] {
            let pcm = expand(assets().ldpc.graph(bg), LiftingConfig::for_zc(zc).unwrap());
            for _ in 0..20 {
                let k = bg.kb_max() * zc;
                let kr = r.random_range(1..=k);
                let word = encode_systematic(&block(&mut r, bg, zc, kr), &pcm, bg).unwrap();
                assert!(is_codeword(&word, &pcm).unwrap(), "bg {bg:?} zc {zc}");
            }
        }
    }
}

#[test]
fn matches_dense_gaussian_elimination() {
    let mut r = rng(22);
    for bg in [BaseGraphId::Bg1, BaseGraphId::Bg2] {
        for zc in LIFTING_SETS
            .iter()
            .flat_map(|s| s.iter().copied())
            .filter(|&z| z <= 16)
        {
            let pcm = expand(assets().ldpc.graph(bg), LiftingConfig::for_zc(zc).unwrap());
            let h = pcm.to_dense().unwrap();
            let k = bg.kb_max() * zc;
            for _ in 0..3 {
                let b = block(&mut r, bg, zc, k);
                let word = encode_systematic(&b, &pcm, bg).unwrap();
                let parity = gf2_parity_solve(&h, b.bits_with_zero_filler())
                    .expect("nonsingular parity part");
                assert_eq!(&word[k..], &parity[..], "bg {bg:?} zc {zc}");
            }
        }
    }
}

#[test]
fn sparse_syndrome_matches_dense() {
    let mut r = rng(23);
    let pcm = expand(
        assets().ldpc.graph(BaseGraphId::Bg2),
        LiftingConfig::for_zc(7).unwrap(),
    );
    let h = pcm.to_dense().unwrap();
    for _ in 0..20 {
        let w = random_bits(&mut r, pcm.cols());
        assert_eq!(syndrome(&w, &pcm).unwrap(), dense_syndrome(&h, &w));
    }
}

#[test]
fn flipped_bit_gives_its_column() {
    let mut r = rng(24);
    let bg = BaseGraphId::Bg1;
    let pcm = expand(assets().ldpc.graph(bg), LiftingConfig::for_zc(5).unwrap());
    let h = pcm.to_dense().unwrap();
    let word = encode_systematic(&block(&mut r, bg, 5, 100), &pcm, bg).unwrap();
    for i in (0..word.len()).step_by(7) {
        let mut w = word.clone();
        w[i] ^= 1;
        let col: Vec<u8> = h.iter().map(|row| row[i]).collect();
        assert_eq!(syndrome(&w, &pcm).unwrap(), col);
    }
}

#[test]
fn filler_range_in_codeword() {
    let bg = BaseGraphId::Bg2;
    let zc = 18;
    let pcm = expand(assets().ldpc.graph(bg), LiftingConfig::for_zc(zc).unwrap());
    let cw = encode(&CodeBlock::new(&[1; 100], 180).unwrap(), &pcm, bg).unwrap();
    assert_eq!(cw.len(), 50 * zc);
    assert_eq!(cw.filler(), 64..144);
    assert!(cw.filler().all(|i| cw.bits_with_zero_filler()[i] == 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_transpose_consistent(rows in prop::collection::vec(prop::collection::vec(0u8..2, 9), 1..7)) {
        let pcm = ParityCheckMatrix::from_dense(&rows).unwrap();
        let adj = adjacency(&pcm);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                prop_assert_eq!(adj.bn(i).contains(&j), v == 1);
                prop_assert_eq!(adj.cn(j).contains(&i), v == 1);
            }
        }
    }

    #[test]
    fn encoding_is_linear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bg = BaseGraphId::Bg2;
        let zc = 6;
        let pcm = expand(assets().ldpc.graph(bg), LiftingConfig::for_zc(zc).unwrap());
        let a = block(&mut r, bg, zc, 60);
        let b = block(&mut r, bg, zc, 60);
        let s: Vec<u8> = a.bits_with_zero_filler().iter().zip(b.bits_with_zero_filler()).map(|(x, y)| x ^ y).collect();
        let wa = encode_systematic(&a, &pcm, bg).unwrap();
        let wb = encode_systematic(&b, &pcm, bg).unwrap();
        let ws = encode_systematic(&CodeBlock::new(&s, 60).unwrap(), &pcm, bg).unwrap();
        let sum: Vec<u8> = wa.iter().zip(&wb).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(ws, sum);
    }
}
