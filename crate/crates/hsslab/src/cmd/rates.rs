use hsslab_core::hss_poly::{
    boxed_cnf, default_cnf_code, degree_certificate, privacy_audit, rate_bound_linear, LinearHss, PolyFamily, ShamirHss,
};
use hsslab_core::Fe;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{field_of, seed};
use crate::config::{need, Params};
use crate::error::{CliError, CliResult};
use crate::report::{ratio, real, Outcome, Table};

/// Joint states enumerated by the privacy check before it falls back to
/// per-input views.
pub const PRIVACY_LIMIT: u64 = 1 << 22;

/// Smallest b with q^b ≥ k.
pub fn min_bundle(q: u64, k: usize) -> usize {
    let mut b = 1;
    while q.pow(b as u32) < k as u64 {
        b += 1;
    }
    b
}

/// The scheme and the bundling degree actually used (Shamir only).
pub fn build(p: &Params) -> CliResult<(Box<dyn LinearHss>, Option<usize>)> {
    let f = field_of(p)?;
    let (t, k, d) = (need(p.t, "t")?, need(p.k, "k")?, need(p.d, "d")?);
    let m = p.m.unwrap_or(d);
    match p.family.as_deref().unwrap_or("cnf") {
        "cnf" => {
            let ell = match p.ell {
                Some(e) => e,
                None => (1..=k.saturating_sub(d * t))
                    .rev()
                    .find(|&e| default_cnf_code(&f, t, k, d, e).is_ok())
                    .ok_or_else(|| CliError::invalid(format!("no built-in code for t={t} k={k} d={d} over F_{}", f.order())))?,
            };
            Ok((boxed_cnf(t, k, d, m, ell, f)?, None))
        }
        "shamir" => {
            let q = f.order() as u64;
            let b0 = min_bundle(q, k);
            let b = p.b.unwrap_or(b0);
            // bundles too small for k points are rounded up to a multiple of b0
            let used = if q.pow(b as u32) >= k as u64 { b } else { b0 * b.div_ceil(b0) };
            Ok((Box::new(ShamirHss::new(t, k, d, m, f, used)?), Some(used)))
        }
        other => Err(CliError::invalid(format!("unknown family `{other}` (cnf or shamir)"))),
    }
}

pub fn family_of(p: &Params, h: &dyn LinearHss) -> CliResult<PolyFamily> {
    match &p.poly {
        Some(src) => {
            let fam = PolyFamily::parse(src, h.field(), h.m())?;
            if fam.polys.len() != h.ell() {
                return Err(CliError::invalid(format!("--poly gives {} polynomials, the scheme evaluates {}", fam.polys.len(), h.ell())));
            }
            Ok(fam)
        }
        None => Ok(PolyFamily::products(h.ell(), h.m(), h.d())),
    }
}

pub fn transcript(h: &dyn LinearHss, fam: &PolyFamily, seed: u64) -> Value {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = h.field().order();
    let sq = h.share_field().order();
    let x: Vec<Fe> = (0..h.n_inputs()).map(|_| rng.gen_range(0..q)).collect();
    let r: Vec<Fe> = (0..h.rand_len()).map(|_| rng.gen_range(0..sq)).collect();
    let tr = h.run(fam, &x, &r);
    json!({
        "functions": fam.to_text(),
        "inputs": x,
        "input_shares": tr.input_shares,
        "output_shares": tr.outputs,
        "reconstructed": tr.reconstructed,
        "expected": h.expected(fam, &x),
        "upload_bits": real(tr.upload_bits),
        "download_bits": real(tr.download_bits),
    })
}

pub fn run(p: &Params) -> CliResult<Outcome> {
    let (h, b_used) = build(p)?;
    let fam = family_of(p, h.as_ref())?;
    let checks = p.checks.as_deref().unwrap_or("all");
    if !matches!(checks, "all" | "cert" | "none") {
        return Err(CliError::invalid("--checks takes all, cert or none"));
    }
    let bound = rate_bound_linear(h.t(), h.k(), h.d())?;
    let mut results = json!({
        "scheme": h.name(),
        "t": h.t(), "k": h.k(), "d": h.d(), "m": h.m(), "ell": h.ell(),
        "field": h.field().order(),
        "share_field": h.share_field().order(),
        "rate": ratio(h.rate()),
        "bound": ratio(bound),
        "upload_bits": real(h.upload_bits()),
        "download_bits": real(h.download_bits()),
    });
    if let Some(b) = b_used {
        results["b"] = json!(b);
        if p.b.is_some_and(|req| req != b) {
            results["b_requested"] = json!(p.b);
        }
    }
    let mut correct = "skipped".to_string();
    let mut private = "skipped".to_string();
    if checks != "none" {
        let cert = degree_certificate(h.as_ref(), &fam)?;
        results["certificate_points"] = json!(cert.points);
        if let Some(c) = cert.counterexample {
            return Err(CliError::invariant(format!(
                "{} fails on inputs {:?} with randomness {:?}: got {:?}, expected {:?}",
                h.name(), c.inputs, c.rand, c.got, c.expected
            )));
        }
        correct = "exhaustive".into();
    }
    if checks == "all" {
        let rep = privacy_audit(h.as_ref(), h.t(), PRIVACY_LIMIT)?;
        if !rep.pass {
            return Err(CliError::invariant(format!("{} leaks to servers {:?}", h.name(), rep.failing_set)));
        }
        results["privacy_states"] = json!(rep.states);
        results["privacy_joint"] = json!(rep.joint);
        private = if rep.joint { "exact-joint" } else { "exact-per-input" }.into();
    }
    results["correct"] = json!(correct);
    results["private"] = json!(private);
    if p.transcript == Some(true) {
        results["transcript"] = transcript(h.as_ref(), &fam, seed(p));
    }
    let row = vec![
        p.family.clone().unwrap_or_else(|| "cnf".into()),
        h.t().to_string(),
        h.k().to_string(),
        h.d().to_string(),
        h.m().to_string(),
        h.field().order().to_string(),
        b_used.map(|b| b.to_string()).unwrap_or_default(),
        h.ell().to_string(),
        ratio(h.rate()),
        ratio(bound),
        crate::report::sig6(h.upload_bits()),
        crate::report::sig6(h.download_bits()),
        correct,
        private,
    ];
    let table = Table {
        header: vec!["family", "t", "k", "d", "m", "field", "b", "ell", "rate", "bound", "upload_bits", "download_bits", "correct", "private"],
        rows: vec![row],
    };
    Ok(Outcome { results, table: Some(table) })
}
