use hsslab_core::blackbox::*;
use hsslab_core::lmsss::LinearCode;
use hsslab_core::Fe;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{field_of, seed};
use crate::config::Params;
use crate::error::{CliError, CliResult};
use crate::report::{ratio, real, Outcome};

/// Enumeration cap for bb_validate before it checks on a basis instead.
pub const VALIDATE_BUDGET: u64 = 1 << 24;

pub fn transform_of(p: &Params) -> CliResult<BlackBoxTransform> {
    let f = field_of(p)?;
    match p.transform.as_deref().unwrap_or("two-server") {
        "two-server" => Ok(bb_two_server(p.k.unwrap_or(3), f)?),
        "packing" => {
            let fam = match p.k {
                None => packing_example(),
                Some(k0) => packing_family(p.n.unwrap_or(k0), k0)?,
            };
            Ok(bb_packing(&fam, f)?)
        }
        "cnf" => {
            let k = p.k.unwrap_or(3);
            let code = LinearCode::parity(f, k)?;
            Ok(bb_cnf(k, p.t.unwrap_or(1), &code, p.ell.unwrap_or(k - 1))?)
        }
        other => Err(CliError::invalid(format!("unknown transform `{other}` (two-server, packing or cnf)"))),
    }
}

pub fn validate(p: &Params) -> CliResult<Outcome> {
    let tr = transform_of(p)?;
    let v = bb_validate(&tr, VALIDATE_BUDGET, true)?;
    let failure = v.failure.as_ref().map(|f| match f {
        BbFailure::Security { set, secret } => json!({ "kind": "security", "servers": set, "secret": secret }),
        BbFailure::Correctness { y } => json!({ "kind": "correctness", "shares": y }),
    });
    let results = json!({
        "transform": tr.name,
        "k0": tr.k0, "k": tr.k, "t": tr.t, "ell": tr.ell,
        "field": tr.field.order(),
        "rate": ratio(tr.rate()),
        "views": (0..tr.k).map(|j| tr.c(j)).collect::<Vec<_>>(),
        "pass": v.pass,
        "exhaustive": v.exhaustive,
        "tuples_checked": v.tuples_checked,
        "sets_checked": v.sets_checked,
        "failure": failure,
    });
    if !v.pass {
        return Err(CliError::invariant(format!("{} fails validation: {}", tr.name, results["failure"])));
    }
    Ok(Outcome::json(results))
}

pub fn demo(p: &Params) -> CliResult<Outcome> {
    let tr = transform_of(p)?;
    let m = p.m.unwrap_or(1);
    let pi0 = MockAdditiveHss { k0: tr.k0, m, field: tr.field.clone() };
    let q = tr.field.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed(p));
    let mut draw = |n: usize| -> Vec<Fe> { (0..n).map(|_| rng.gen_range(0..q)).collect() };
    let funcs: Vec<Vec<Fe>> = (0..tr.ell).map(|_| draw(m)).collect();
    let inputs: Vec<Vec<Fe>> = (0..tr.ell).map(|_| draw(m)).collect();
    let rand = draw(tr.ell * pi0.rand_len());
    let t = apply_blackbox(&tr, &pi0, &funcs, &inputs, &rand)?;
    let expected: Vec<Fe> = funcs.iter().zip(&inputs).map(|(c, x)| tr.field.dot(c, x)).collect();
    if t.reconstructed != expected {
        return Err(CliError::invariant(format!("{} reconstructed {:?}, expected {:?}", tr.name, t.reconstructed, expected)));
    }
    let out_bits = tr.ell as f64 * tr.field.log2_order();
    Ok(Outcome::json(json!({
        "transform": tr.name,
        "functions": funcs,
        "inputs": inputs,
        "input_shares": t.input_shares,
        "output_shares": t.outputs,
        "reconstructed": t.reconstructed,
        "expected": expected,
        "upload_bits": real(t.upload_bits),
        "per_server_upload_bits": individual_upload_bits(&tr, &pi0).into_iter().map(real).collect::<Vec<_>>(),
        "download_bits": real(t.download_bits),
        "rate": real(out_bits / t.download_bits),
        "rate_exact": ratio(tr.rate()),
    })))
}
