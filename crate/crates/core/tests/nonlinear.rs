use std::sync::Arc;

use hsslab_core::galois::{Fe, Field, FieldCtx};
use hsslab_core::nonlinear::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fld(q: u64) -> Field {
    Arc::new(FieldCtx::of_order(q).unwrap())
}

#[test]
fn assignment_totals_fall_in_three_classes() {
    let rep = enumerate_assignments(&fld(2)).unwrap();
    assert_eq!(rep.results.len(), 512);
    let want = [2.65873, 2.85200, 2.90564];
    assert_eq!(rep.classes.len(), 3);
    for ((v, _), w) in rep.classes.iter().zip(want) {
        assert!((v - w).abs() < 1e-3, "{v} vs {w}");
    }
    assert_eq!(rep.min_total, rep.greedy_total);
    assert!((rep.greedy_total - 2.65873).abs() < 1e-3);
    assert!((1.0 / rep.symmetric_total - 0.350).abs() < 1e-3);
}

#[test]
fn assignments_are_valid_schemes() {
    let f = fld(2);
    for mask in [0u8, 5, 63] {
        for diag in [GREEDY_DIAG, SYMMETRIC_DIAG] {
            let h = assignment_hss(&f, diag, mask).unwrap();
            assert!(h.verify_symbolic());
            let (v, _) = shss_audit(&h).unwrap();
            assert_eq!(v.states, 16);
        }
    }
}

#[test]
fn codec_at_block_length_eight() {
    let f = fld(2);
    let h = greedy_hss(1, 3, 2, f.clone()).unwrap();
    let t = exact_distributions(&h, &all_secrets(&f, 2)).unwrap();
    let req = sw_requirements(&t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut stats = SwStats::default();
    for seed in 0..200 {
        let code = SwCode::from_requirements(&req, 8, 0.25, seed, 3.0, 2).unwrap();
        assert_eq!(code.b, vec![9, 10, 10]);
        let s = sw_experiment(&h, &t, &code, 1, &mut rng).unwrap();
        stats.trials += 1;
        stats.decoded += s.decoded;
        stats.correct += s.correct;
        stats.ambiguous += s.ambiguous;
    }
    assert_eq!(stats.decoded, stats.correct);
    assert!(stats.success_rate() >= 0.9, "{stats:?}");
}

#[test]
fn warmup_roundtrip_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let q = [2u32, 3, 4, 5, 7, 8, 11][rng.gen_range(0..7)];
        let ell = rng.gen_range(0..80);
        let p_zero: f64 = rng.gen();
        let y: Vec<Fe> = (0..ell).map(|_| if rng.gen::<f64>() < p_zero { 0 } else { rng.gen_range(1..q) }).collect();
        let bits = warmup_compress(&y, q);
        assert_eq!(warmup_decompress(&bits, q, ell).unwrap(), y);
    }
}

#[test]
fn warmup_length_matches_entropy_formula() {
    let h = ShamirProductHss::new(5, 4, fld(5)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ell = 256;
    let mut total = 0usize;
    let mut n = 0usize;
    for _ in 0..40 {
        let cols: Vec<Vec<Fe>> = (0..ell)
            .map(|_| {
                let x: Vec<Fe> = (0..4).map(|_| rng.gen_range(0..5)).collect();
                let r: Vec<Fe> = (0..4).map(|_| rng.gen_range(0..5)).collect();
                h.outputs(&x, &r)
            })
            .collect();
        for j in 0..5 {
            let row: Vec<Fe> = cols.iter().map(|c| c[j]).collect();
            total += warmup_compress(&row, 5).len();
            n += 1;
        }
    }
    let mean = total as f64 / n as f64;
    let want = warmup_expected_bits(ell, 5, 4);
    assert!((mean - want).abs() / want < 0.05, "{mean} vs {want}");
}

#[test]
fn uniform_marginals_give_plain_rate() {
    // one Shamir share of a single input is uniform on F_5
    let h = ShamirProductHss::new(2, 1, fld(5)).unwrap();
    let t = exact_distributions(&h, &all_secrets(&h.field, 1)).unwrap();
    let r = naive_rate(&t).unwrap();
    assert!((r - 0.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn marginals_do_not_depend_on_the_secret(q in prop::sample::select(vec![2u64, 3]), k in 3usize..5) {
        let h = greedy_hss(1, k, 2, fld(q)).unwrap();
        let t = exact_distributions(&h, &all_secrets(&h.field, 2)).unwrap();
        for j in 0..k {
            let m0 = t.marginal(0, j);
            for c in 1..t.classes.len() {
                prop_assert_eq!(t.marginal(c, j), m0.clone());
            }
        }
        for c in 0..t.classes.len() {
            prop_assert!(t.sums_to_one(c));
        }
    }

    #[test]
    fn greedy_partitions_monomials(t in 1usize..3, d in 1usize..4, extra in 1usize..3) {
        let k = d * t + extra;
        let h = greedy_hss(t, k, d, fld(2)).unwrap();
        prop_assert!(h.verify_symbolic());
        let n = h.sets.len();
        prop_assert_eq!(h.terms.len(), n.pow(d as u32));
    }

    #[test]
    fn warmup_is_lossless(y in prop::collection::vec(0u32..7, 0..60)) {
        let bits = warmup_compress(&y, 7);
        prop_assert_eq!(warmup_decompress(&bits, 7, y.len()).unwrap(), y);
    }

    #[test]
    fn digests_fit_their_length(row in prop::collection::vec(0u32..2, 8), seed in any::<u64>(), b in 1usize..16) {
        let code = SwCode::new(8, vec![b], seed, 1.0, 2).unwrap();
        prop_assert!(sw_encode(&row, &code, 0) < 1u64 << b);
    }
}
