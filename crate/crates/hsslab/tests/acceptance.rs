//! One line per acceptance criterion; exits non-zero if any fails.

use std::sync::Arc;
use std::time::Instant;

use hsslab_core::audit::*;
use hsslab_core::blackbox::*;
use hsslab_core::hss_poly::*;
use hsslab_core::lmsss::LinearCode;
use hsslab_core::nonlinear::*;
use hsslab_core::pir::{Pir, PirParams};
use hsslab_core::{Fe, Field, FieldCtx};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn fld(q: u64) -> Field {
    Arc::new(FieldCtx::of_order(q).unwrap())
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(x: impl std::fmt::Display) -> String {
    x.to_string()
}

fn linear_configs() -> Result<Vec<(Box<dyn LinearHss>, Ratio<u64>)>, String> {
    Ok(vec![
        (boxed_cnf(1, 3, 1, 1, 2, fld(2)).map_err(e)?, Ratio::new(2, 3)),
        (boxed_cnf(1, 3, 2, 2, 1, fld(2)).map_err(e)?, Ratio::new(1, 3)),
        (Box::new(CnfHss::new(2, 7, 1, 1, 4, LinearCode::hamming(fld(2), 3).map_err(e)?).map_err(e)?), Ratio::new(4, 7)),
        (boxed_cnf(1, 5, 2, 2, 3, fld(8)).map_err(e)?, Ratio::new(3, 5)),
        (Box::new(ShamirHss::new(1, 5, 2, 2, fld(8), 1).map_err(e)?), Ratio::new(3, 5)),
    ])
}

fn rate_optimal() -> Check {
    let start = Instant::now();
    let mut names = Vec::new();
    for (h, want) in linear_configs()? {
        ensure(h.rate() == want, format!("{} has rate {}", h.name(), h.rate()))?;
        let fam = PolyFamily::products(h.ell(), h.m(), h.d());
        let cert = degree_certificate(h.as_ref(), &fam).map_err(e)?;
        ensure(cert.counterexample.is_none(), format!("{} is incorrect: {:?}", h.name(), cert.counterexample))?;
        names.push(format!("{}={}", h.name(), want));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("took {secs:.1} s"))?;
    Ok(names.join(", "))
}

fn privacy_exact() -> Check {
    let mut states = 0;
    for (h, _) in linear_configs()? {
        let rep = privacy_audit(h.as_ref(), h.t(), 1 << 22).map_err(e)?;
        ensure(rep.pass, format!("{} leaks to {:?}", h.name(), rep.failing_set))?;
        states += rep.states;
    }
    Ok(format!("exact view multisets equal, {states} views compared"))
}

fn negative_results() -> Check {
    let rows = rate_bound_grid(30).map_err(e)?;
    ensure(rows.len() == 30, format!("grid has {} rows", rows.len()))?;
    ensure(rows.iter().all(|r| r.ok()), "a scheme beats 1-dt/k")?;
    let pts = corollary_nonmds_check(&[(5, 1, 3, 2), (7, 1, 5, 2)]).map_err(e)?;
    ensure(pts.iter().all(|p| p.applicable && p.strict()), "a non-MDS point attains the bound")?;
    Ok(format!("30 rows within bound; strict at (5,1,3,2) and (7,1,5,2) after {} codes", pts.iter().map(|p| p.codes_checked).sum::<u64>()))
}

fn pir_end_to_end() -> Check {
    let start = Instant::now();
    let pir = Pir::new(PirParams::new(2, 1, 5, 1, 100).map_err(e)?).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let db: Vec<Vec<u8>> = (0..100).map(|_| (0..pir.params.record_bits()).map(|_| rng.gen_range(0..2)).collect()).collect();
    let enc = pir.encode_db(&db).map_err(e)?;
    for j in 0..100 {
        let (qs, st) = pir.query(j, &mut rng).map_err(e)?;
        let ans: Vec<Vec<Fe>> = (0..5).map(|v| pir.answer(&qs[v], &enc, v)).collect::<Result<_, _>>().map_err(e)?;
        ensure(pir.reconstruct(&st, &ans).map_err(e)? == db[j], format!("index {} wrong", j + 1))?;
    }
    ensure(pir.download_bits() == 15, format!("download {}", pir.download_bits()))?;
    ensure(pir.rate() == Ratio::new(3, 5), format!("rate {}", pir.rate()))?;
    let ups: Vec<usize> = [25, 100, 400]
        .iter()
        .map(|&n| Pir::new(PirParams::new(2, 1, 5, 1, n).unwrap()).unwrap().upload_bits())
        .collect();
    let growth = (ups[1] as f64 / ups[0] as f64).max(ups[2] as f64 / ups[1] as f64);
    ensure(growth <= 2.2, format!("upload grows {growth:.2}x"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, format!("took {secs:.1} s"))?;
    Ok(format!("100/100 records, download 15 bits, rate 3/5, upload {ups:?} (max growth {growth:.2}x)"))
}

fn transcript_rate(tr: &BlackBoxTransform, seed: u64) -> Result<f64, String> {
    let pi0 = MockAdditiveHss { k0: tr.k0, m: 2, field: tr.field.clone() };
    let q = tr.field.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |n: usize| -> Vec<Fe> { (0..n).map(|_| rng.gen_range(0..q)).collect() };
    let funcs: Vec<Vec<Fe>> = (0..tr.ell).map(|_| draw(2)).collect();
    let xs: Vec<Vec<Fe>> = (0..tr.ell).map(|_| draw(2)).collect();
    let r = draw(tr.ell * pi0.rand_len());
    let t = apply_blackbox(tr, &pi0, &funcs, &xs, &r).map_err(e)?;
    let want: Vec<Fe> = funcs.iter().zip(&xs).map(|(c, x)| tr.field.dot(c, x)).collect();
    ensure(t.reconstructed == want, format!("{} reconstructs wrongly", tr.name))?;
    Ok(tr.ell as f64 * tr.field.log2_order() / t.download_bits)
}

fn blackbox() -> Check {
    for q in [2, 3] {
        for k in 2..=6usize {
            let tr = bb_two_server(k, fld(q)).map_err(e)?;
            let v = bb_validate(&tr, 1 << 24, false).map_err(e)?;
            ensure(v.pass && v.exhaustive, format!("two-server k={k} over F_{q}: {:?}", v.failure))?;
            let r = transcript_rate(&tr, k as u64)?;
            ensure((r - (k - 1) as f64 / k as f64).abs() < 1e-12, format!("k={k} transcript rate {r}"))?;
        }
        let tr = bb_packing(&packing_example(), fld(q)).map_err(e)?;
        let v = bb_validate(&tr, 1 << 24, false).map_err(e)?;
        ensure(v.pass && v.exhaustive, format!("packing over F_{q}: {:?}", v.failure))?;
        let r = transcript_rate(&tr, 9)?;
        ensure((r - 0.4).abs() < 1e-12, format!("packing transcript rate {r}"))?;
    }
    Ok("two-server k=2..6 and packing pass exhaustively over F_2 and F_3; rates (k-1)/k and 2/5".into())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-3
}

fn sw_table() -> Check {
    let start = Instant::now();
    let h = greedy_hss(1, 3, 2, fld(2)).map_err(e)?;
    let t = exact_distributions(&h, &all_secrets(&h.field, 2)).map_err(e)?;
    let req = sw_requirements(&t).map_err(e)?;
    for want in [0.75089, 0.90690, 1.70429, 1.84745, 2.65873] {
        ensure(req.bounds.iter().any(|b| close(b.bits, want)), format!("no constraint near {want}"))?;
    }
    let rate = req.rate(1.0);
    ensure(close(rate, 0.37612), format!("best rate {rate}"))?;
    let rep = enumerate_assignments(&fld(2)).map_err(e)?;
    let totals: Vec<f64> = rep.classes.iter().map(|c| c.0).collect();
    ensure(totals.len() == 3, format!("{} total classes", totals.len()))?;
    for want in [2.65873, 2.90564, 2.85200] {
        ensure(totals.iter().any(|&v| close(v, want)), format!("no total near {want}"))?;
    }
    ensure(rep.greedy_total == rep.min_total, "greedy is not minimal")?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, format!("took {secs:.1} s"))?;
    Ok(format!("constraints match, rate {rate:.5}, totals {totals:.5?} over {} assignments, greedy minimal", rep.results.len()))
}

fn naive_and_symmetric() -> Check {
    let h = greedy_hss(1, 3, 2, fld(2)).map_err(e)?;
    let t = exact_distributions(&h, &all_secrets(&h.field, 2)).map_err(e)?;
    let naive = naive_rate(&t).map_err(e)?;
    ensure(close(naive, 0.367), format!("naive rate {naive}"))?;
    let rep = enumerate_assignments(&fld(2)).map_err(e)?;
    let sym = 1.0 / rep.symmetric_total;
    ensure(close(sym, 0.350), format!("symmetric rate {sym}"))?;
    Ok(format!("naive {naive:.4}, symmetric {sym:.4}"))
}

fn shss_verdicts() -> Check {
    for q in [2, 3] {
        let (v, _) = shss_audit(&greedy_hss(1, 3, 2, fld(q)).map_err(e)?).map_err(e)?;
        ensure(v.pass, format!("greedy (1,2,3) over F_{q} fails"))?;
    }
    let (v, _) = shss_audit(&ShamirProductHss::new(3, 2, fld(5)).map_err(e)?).map_err(e)?;
    let w = v.witness.ok_or("Shamir product passes")?;
    ensure(w.p != w.p2, "witness does not separate")?;
    let (v, t) = shss_audit(&greedy_hss(1, 4, 3, fld(3)).map_err(e)?).map_err(e)?;
    ensure(!v.pass, "greedy (1,3,4) over F_3 passes")?;
    let zero = vec![0; 4];
    let probs: Vec<Ratio<u64>> = (0..t.classes.len()).map(|c| t.prob(c, &zero)).collect();
    for want in [Ratio::new(431, 2187), Ratio::new(17, 81)] {
        ensure(probs.contains(&want), format!("Pr[0000] never equals {want}"))?;
    }
    Ok(format!(
        "greedy PASS over F_2/F_3; Shamir FAIL at x={:?} vs {:?} on z={:?}; Pr[0000] in {{431/2187, 17/81}} (raw denominator {})",
        w.x, w.x2, w.z, v.states
    ))
}

fn appendix_search() -> Check {
    let start = Instant::now();
    let rep = hsslab::cmd::audit::search(&F8Coords::standard());
    ensure(rep.candidates == 86016, format!("{} candidates", rep.candidates))?;
    ensure(rep.witnesses.is_empty(), format!("{} witnesses", rep.witnesses.len()))?;
    let c = cnf_witness_check().map_err(e)?;
    ensure(c.correct && c.private && c.hss_valid && c.download_bits == 5, "one-bit CNF scheme check fails")?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("took {secs:.1} s"))?;
    Ok(format!("86016 candidates, 0 witnesses, CNF control passes ({:.2} s)", secs))
}

fn codec() -> Check {
    let f = fld(2);
    let h = greedy_hss(1, 3, 2, f.clone()).map_err(e)?;
    let t = exact_distributions(&h, &all_secrets(&f, 2)).map_err(e)?;
    let req = sw_requirements(&t).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut decoded, mut correct) = (0, 0);
    for seed in 0..200 {
        let code = SwCode::from_requirements(&req, 8, 0.25, seed, 3.0, 2).map_err(e)?;
        let s = sw_experiment(&h, &t, &code, 1, &mut rng).map_err(e)?;
        decoded += s.decoded;
        correct += s.correct;
    }
    ensure(decoded == correct, format!("{} wrong decodes", decoded - correct))?;
    ensure(correct >= 180, format!("success {correct}/200"))?;
    for _ in 0..10_000 {
        let q = [2u32, 3, 5, 7][rng.gen_range(0..4)];
        let y: Vec<Fe> = (0..rng.gen_range(0..64)).map(|_| if rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..q) }).collect();
        ensure(warmup_decompress(&warmup_compress(&y, q), q, y.len()).map_err(e)? == y, "warm-up is lossy")?;
    }
    let sh = ShamirProductHss::new(5, 4, fld(5)).map_err(e)?;
    let (mut total, mut rows) = (0, 0);
    for _ in 0..40 {
        let cols: Vec<Vec<Fe>> = (0..256)
            .map(|_| {
                let x: Vec<Fe> = (0..4).map(|_| rng.gen_range(0..5)).collect();
                let r: Vec<Fe> = (0..sh.rand_len()).map(|_| rng.gen_range(0..5)).collect();
                sh.outputs(&x, &r)
            })
            .collect();
        for j in 0..5 {
            let row: Vec<Fe> = cols.iter().map(|c| c[j]).collect();
            total += warmup_compress(&row, 5).len();
            rows += 1;
        }
    }
    let mean = total as f64 / rows as f64;
    let want = warmup_expected_bits(256, 5, 4);
    let rel = (mean - want).abs() / want;
    ensure(rel < 0.05, format!("warm-up mean {mean:.1} vs {want:.1}"))?;
    Ok(format!("{correct}/200 decoded correctly, 0 wrong; warm-up lossless on 10^4 inputs, mean {mean:.1} vs {want:.1} bits ({:.1}%)", rel * 100.0))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("rate-optimal linear HSS", rate_optimal),
        ("perfect privacy", privacy_exact),
        ("negative-result audits", negative_results),
        ("PIR end to end", pir_end_to_end),
        ("black-box transforms", blackbox),
        ("Slepian-Wolf constraint table", sw_table),
        ("naive and symmetric rates", naive_and_symmetric),
        ("SHSS verdicts", shss_verdicts),
        ("Shamir impossibility search", appendix_search),
        ("Slepian-Wolf codec and warm-up", codec),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
