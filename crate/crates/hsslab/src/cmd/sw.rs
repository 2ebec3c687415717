use hsslab_core::nonlinear::*;
use hsslab_core::Fe;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{field_of, seed};
use crate::config::{need, Params};
use crate::error::{CliError, CliResult};
use crate::report::{ratio, real, sig6, Outcome, Table};

pub type Scheme = Box<dyn OutputShareHss + Send + Sync>;

pub fn scheme_of(p: &Params) -> CliResult<Scheme> {
    let f = field_of(p)?;
    match p.scheme.as_deref().unwrap_or("greedy") {
        "greedy" => Ok(Box::new(greedy_hss(need(p.t, "t")?, need(p.k, "k")?, need(p.d, "d")?, f)?)),
        "shamir" => {
            if p.t.is_some_and(|t| t != 1) {
                return Err(CliError::invalid("the Shamir product scheme is 1-private"));
            }
            Ok(Box::new(ShamirProductHss::new(need(p.k, "k")?, need(p.d, "d")?, f)?))
        }
        "symmetric" => Ok(Box::new(assignment_hss(&f, SYMMETRIC_DIAG, 0)?)),
        other => Err(CliError::invalid(format!("unknown scheme `{other}` (greedy, shamir or symmetric)"))),
    }
}

fn set_label(set: &[usize]) -> String {
    set.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join("+")
}

pub fn requirements(h: &dyn OutputShareHss) -> CliResult<(DistTable, SwRequirements)> {
    let table = exact_distributions(h, &all_secrets(h.field(), h.m()))?;
    let req = sw_requirements(&table)?;
    Ok((table, req))
}

pub fn rates(p: &Params) -> CliResult<Outcome> {
    let h = scheme_of(p)?;
    let (table, req) = requirements(h.as_ref())?;
    let log2_y = h.field().log2_order();
    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    for sb in &req.bounds {
        let alloc: f64 = sb.set.iter().map(|&j| req.allocation[j]).sum();
        rows.push(vec![set_label(&sb.set), sig6(sb.bits), sig6(alloc)]);
        bounds.push(json!({
            "set": sb.set.iter().map(|j| j + 1).collect::<Vec<_>>(),
            "bits": real(sb.bits),
            "allocated": real(alloc),
            "mixture": sb.pi.iter().map(|&x| real(x)).collect::<Vec<_>>(),
        }));
    }
    let results = json!({
        "servers": req.k,
        "distributions": req.dists.len(),
        "states_per_secret": table.total,
        "bounds": bounds,
        "allocation": req.allocation.iter().map(|&x| real(x)).collect::<Vec<_>>(),
        "total_bits": real(req.total),
        "rate": real(req.rate(log2_y)),
        "naive_rate": real(naive_rate(&table)?),
    });
    Ok(Outcome { results, table: Some(Table { header: vec!["set", "bits", "allocated"], rows }) })
}

pub fn run(p: &Params) -> CliResult<Outcome> {
    let h = scheme_of(p)?;
    let (table, req) = requirements(h.as_ref())?;
    let ell = p.ell.unwrap_or(8);
    let eps = p.eps.unwrap_or(3.0);
    let slack = p.slack.unwrap_or(0.25);
    let trials = p.trials.unwrap_or(200);
    let base = seed(p);
    let q = h.field().order();
    let per_trial: Vec<(Vec<usize>, SwStats)> = (0..trials)
        .into_par_iter()
        .map(|i| -> CliResult<_> {
            let code = SwCode::from_requirements(&req, ell, slack, base.wrapping_add(i as u64), eps, q)?;
            let mut rng = ChaCha8Rng::seed_from_u64(base);
            rng.set_stream(i as u64);
            Ok((code.b.clone(), sw_experiment(h.as_ref(), &table, &code, 1, &mut rng)?))
        })
        .collect::<CliResult<_>>()?;
    let mut stats = SwStats { trials, ..SwStats::default() };
    for (_, s) in &per_trial {
        stats.decoded += s.decoded;
        stats.correct += s.correct;
        stats.ambiguous += s.ambiguous;
    }
    let b = per_trial.first().map(|(b, _)| b.clone()).unwrap_or_default();
    let raw_bits = ell * h.k() * (32 - (q - 1).leading_zeros()) as usize;
    let wrong = stats.decoded - stats.correct;
    let results = json!({
        "ell": ell,
        "eps": eps,
        "slack": slack,
        "digest_bits": b,
        "download_bits": b.iter().sum::<usize>(),
        "raw_bits": raw_bits,
        "allocation": req.allocation.iter().map(|&x| real(x)).collect::<Vec<_>>(),
        "trials": stats.trials,
        "decoded": stats.decoded,
        "correct": stats.correct,
        "wrong": wrong,
        "ambiguous": stats.ambiguous,
        "success_rate": real(stats.success_rate()),
    });
    if wrong > 0 {
        eprintln!("warning: {wrong} decodes returned a wrong output");
    }
    Ok(Outcome::json(results))
}

pub fn assignments(p: &Params) -> CliResult<Outcome> {
    let f = match p.field {
        Some(_) => field_of(p)?,
        None => field_of(&Params { field: Some(2), ..Params::default() })?,
    };
    let rep = enumerate_assignments(&f)?;
    let log2_y = f.log2_order();
    let classes: Vec<Value> = rep.classes.iter().map(|(v, n)| json!({ "total_bits": real(*v), "count": n })).collect();
    let rows = rep
        .classes
        .iter()
        .map(|(v, n)| vec![sig6(*v), n.to_string(), sig6(log2_y / v)])
        .collect();
    let results = json!({
        "assignments": rep.results.len(),
        "classes": classes,
        "greedy_total_bits": real(rep.greedy_total),
        "greedy_rate": real(log2_y / rep.greedy_total),
        "symmetric_total_bits": real(rep.symmetric_total),
        "symmetric_rate": real(log2_y / rep.symmetric_total),
        "min_total_bits": real(rep.min_total),
        "greedy_is_minimal": (rep.greedy_total - rep.min_total).abs() < 1e-9,
    });
    Ok(Outcome { results, table: Some(Table { header: vec!["total_bits", "count", "rate"], rows }) })
}

pub fn warmup(p: &Params) -> CliResult<Outcome> {
    let f = field_of(p)?;
    let d = need(p.d, "d")?;
    let k = p.k.unwrap_or(d + 1);
    let h = ShamirProductHss::new(k, d, f.clone())?;
    let ell = p.ell.unwrap_or(256);
    let trials = p.trials.unwrap_or(40);
    let q = f.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed(p));
    let mut total = 0usize;
    let mut rows = 0usize;
    for _ in 0..trials {
        let cols: Vec<Vec<Fe>> = (0..ell)
            .map(|_| {
                let x: Vec<Fe> = (0..h.m()).map(|_| rng.gen_range(0..q)).collect();
                let r: Vec<Fe> = (0..h.rand_len()).map(|_| rng.gen_range(0..q)).collect();
                h.outputs(&x, &r)
            })
            .collect();
        for j in 0..k {
            let row: Vec<Fe> = cols.iter().map(|c| c[j]).collect();
            let bits = warmup_compress(&row, q);
            if warmup_decompress(&bits, q, ell)? != row {
                return Err(CliError::invariant("warm-up compressor lost information"));
            }
            total += bits.len();
            rows += 1;
        }
    }
    let mean = total as f64 / rows as f64;
    let want = warmup_expected_bits(ell, q, d);
    Ok(Outcome::json(json!({
        "ell": ell,
        "rows": rows,
        "mean_bits": real(mean),
        "expected_bits": real(want),
        "relative_error": real((mean - want).abs() / want),
        "raw_bits": ell * (32 - (q - 1).leading_zeros()) as usize,
        "lossless": true,
    })))
}

pub fn shss(p: &Params) -> CliResult<Outcome> {
    let h = scheme_of(p)?;
    let (v, table) = shss_audit(h.as_ref())?;
    let zeros = vec![0; h.k()];
    let all_zero: Vec<Value> = table
        .classes
        .iter()
        .enumerate()
        .map(|(c, cl)| json!({ "secret": cl.secret, "value": cl.value, "p": ratio(table.prob(c, &zeros)) }))
        .collect();
    let witness = v.witness.as_ref().map(|w| {
        json!({
            "x": w.x, "x_other": w.x2, "value": w.value, "z": w.z,
            "p": ratio(w.p), "p_other": ratio(w.p2),
        })
    });
    Ok(Outcome::json(json!({
        "verdict": if v.pass { "PASS" } else { "FAIL" },
        "secrets": v.secrets,
        "states_per_secret": v.states,
        "witness": witness,
        "all_zero_output": all_zero,
    })))
}
