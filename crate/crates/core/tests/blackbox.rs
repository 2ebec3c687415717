use hsslab_core::blackbox::*;
use hsslab_core::galois::{Fe, Field, FieldCtx};
use num_rational::Ratio;
use proptest::prelude::*;

fn fld(p: u32) -> Field {
    FieldCtx::shared(p, 1).unwrap()
}

fn transcript_rate(tr: &BlackBoxTransform, f: &Field, x: &[Vec<Fe>], r: &[Fe]) -> f64 {
    let pi0 = MockAdditiveHss { k0: tr.k0, m: 1, field: f.clone() };
    let funcs = vec![vec![1]; tr.ell];
    let t = apply_blackbox(tr, &pi0, &funcs, x, r).unwrap();
    assert_eq!(t.reconstructed, x.iter().map(|v| v[0]).collect::<Vec<_>>());
    tr.ell as f64 * f.log2_order() / t.download_bits
}

#[test]
fn two_server_family_validates() {
    for p in [2, 3] {
        let f = fld(p);
        for k in 2..=6u64 {
            let tr = bb_two_server(k as usize, f.clone()).unwrap();
            let v = bb_validate(&tr, 1 << 24, false).unwrap();
            assert!(v.pass && v.exhaustive, "k={k} p={p}");
            assert_eq!(v.tuples_checked, (p as u64).pow(2 * (k as u32 - 1)));
            let x: Vec<Vec<Fe>> = (0..tr.ell).map(|i| vec![(i as Fe) % p]).collect();
            let r: Vec<Fe> = (0..tr.ell).map(|i| (i as Fe + 1) % p).collect();
            let rate = transcript_rate(&tr, &f, &x, &r);
            assert!((rate - (k - 1) as f64 / k as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn packing_example_validates() {
    for p in [2, 3] {
        let f = fld(p);
        let tr = bb_packing(&packing_example(), f.clone()).unwrap();
        assert_eq!(tr.rate(), Ratio::new(2, 5));
        assert!(bb_validate(&tr, 1 << 24, false).unwrap().pass);
        let rate = transcript_rate(&tr, &f, &[vec![1], vec![p - 1]], &[1, 0, 1, 1]);
        assert!((rate - 0.4).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_server_reconstructs_sums(k in 2usize..7, seed in prop::collection::vec(0u32..3, 20)) {
        let f = fld(3);
        let tr = bb_two_server(k, f.clone()).unwrap();
        let y: Vec<Vec<Fe>> = (0..tr.ell).map(|i| vec![seed[2 * i], seed[2 * i + 1]]).collect();
        let z = tr.apply(&y).concat();
        let rec = tr.target.rec_full().mul_vec(&z, &f);
        let want: Vec<Fe> = y.iter().map(|v| f.add(v[0], v[1])).collect();
        prop_assert_eq!(rec, want);
    }
}
