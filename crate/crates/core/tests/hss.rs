use hsslab_core::galois::{Fe, Field, FieldCtx};
use hsslab_core::hss_poly::*;
use hsslab_core::lmsss::LinearCode;
use num_rational::Ratio;
use proptest::prelude::*;

fn fld(p: u32, s: u32) -> Field {
    FieldCtx::shared(p, s).unwrap()
}

fn configs() -> Vec<(Box<dyn LinearHss>, Ratio<u64>)> {
    vec![
        (boxed_cnf(1, 3, 1, 1, 2, fld(2, 1)).unwrap(), Ratio::new(2, 3)),
        (boxed_cnf(1, 3, 2, 2, 1, fld(2, 1)).unwrap(), Ratio::new(1, 3)),
        (Box::new(CnfHss::new(2, 7, 1, 1, 4, LinearCode::hamming(fld(2, 1), 3).unwrap()).unwrap()), Ratio::new(4, 7)),
        (boxed_cnf(1, 5, 2, 2, 3, fld(2, 3)).unwrap(), Ratio::new(3, 5)),
        (Box::new(ShamirHss::new(1, 3, 1, 1, fld(2, 2), 1).unwrap()), Ratio::new(2, 3)),
        (Box::new(ShamirHss::new(1, 5, 1, 1, fld(2, 1), 3).unwrap()), Ratio::new(4, 5)),
        (Box::new(ShamirHss::new(1, 5, 2, 2, fld(2, 3), 1).unwrap()), Ratio::new(3, 5)),
    ]
}

#[test]
fn rates_and_certificates() {
    for (h, rate) in configs() {
        assert_eq!(h.rate(), rate, "{}", h.name());
        let fam = PolyFamily::products(h.ell(), h.m(), h.d());
        let cert = degree_certificate(h.as_ref(), &fam).unwrap();
        assert_eq!(cert.counterexample, None, "{}", h.name());
        if h.t() * h.d() < h.k() && h.name().starts_with("cnf") && h.ell() + h.d() * h.t() == h.k() {
            assert_eq!(rate, rate_bound_linear(h.t(), h.k(), h.d()).unwrap());
        }
    }
}

#[test]
fn privacy_is_exact() {
    for (h, _) in configs() {
        let rep = privacy_audit(h.as_ref(), h.t(), 1 << 22).unwrap();
        assert!(rep.pass, "{}", h.name());
    }
}

#[test]
fn download_meter_matches_closed_form() {
    for (h, rate) in configs() {
        let ell_bits = h.ell() as f64 * h.field().log2_order();
        let want = ell_bits / (*rate.numer() as f64 / *rate.denom() as f64);
        assert!((h.download_bits() - want).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shamir_products_are_correct(inputs in prop::collection::vec(0u32..8, 6), rand in prop::collection::vec(0u32..4096, 64)) {
        let h = ShamirHss::new(1, 5, 2, 2, fld(2, 3), 1).unwrap();
        let fam = PolyFamily::products(3, 2, 2);
        let q = h.share_field().order();
        let r: Vec<Fe> = (0..h.rand_len()).map(|i| rand[i % rand.len()] % q).collect();
        let x: Vec<Fe> = (0..h.n_inputs()).map(|i| inputs[i % inputs.len()]).collect();
        let tr = h.run(&fam, &x, &r);
        prop_assert_eq!(tr.reconstructed, h.expected(&fam, &x));
    }

    #[test]
    fn lower_degree_families_evaluate(c0 in 0u32..8, c1 in 0u32..8, c2 in 0u32..8, x in prop::collection::vec(0u32..8, 6), r in prop::collection::vec(0u32..8, 40)) {
        let h = boxed_cnf(1, 5, 2, 2, 3, fld(2, 3)).unwrap();
        let fam = PolyFamily::parse(&format!("{c0}*x1 + {c1}; {c2}; x2"), h.field(), 2).unwrap();
        let rr: Vec<Fe> = (0..h.rand_len()).map(|i| r[i % r.len()]).collect();
        let xs: Vec<Fe> = (0..h.n_inputs()).map(|i| x[i % x.len()]).collect();
        let tr = h.run(&fam, &xs, &rr);
        prop_assert_eq!(tr.reconstructed, h.expected(&fam, &xs));
    }
}
