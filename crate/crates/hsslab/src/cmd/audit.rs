use std::time::Instant;

use hsslab_core::audit::*;
use hsslab_core::Fe;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::Ctx;
use crate::config::Params;
use crate::error::{CliError, CliResult};
use crate::report::{ratio, real, Outcome, Table};

pub const NONMDS_GRID: [(usize, usize, usize, usize); 3] = [(5, 1, 3, 2), (7, 1, 5, 2), (3, 2, 4, 1)];

fn basis_of(p: &Params) -> CliResult<F8Coords> {
    let Some(src) = &p.basis else { return Ok(F8Coords::standard()) };
    let v: Vec<Fe> = src
        .split(',')
        .map(|s| s.trim().parse::<Fe>().map_err(|_| CliError::invalid(format!("bad basis element `{s}`"))))
        .collect::<CliResult<_>>()?;
    let arr: [Fe; 3] = v.try_into().map_err(|_| CliError::invalid("a basis of F_8 has three elements"))?;
    Ok(F8Coords::new(arr)?)
}

/// The 21 point sets are searched in parallel and merged in set order.
pub fn search(fc: &F8Coords) -> SearchReport {
    let sets = point_sets();
    let parts: Vec<(u64, Vec<SearchWitness>)> = sets.par_iter().map(|a| search_point_set(fc, a)).collect();
    let mut witnesses: Vec<SearchWitness> = parts.iter().flat_map(|(_, w)| w.clone()).collect();
    witnesses.sort_by(|a, b| (&a.alphas, a.y).cmp(&(&b.alphas, b.y)));
    SearchReport {
        servers: SERVERS,
        secrets: SECRETS,
        share_field: 8,
        basis: fc.basis,
        candidates: parts.iter().map(|(c, _)| c).sum(),
        witnesses,
    }
}

pub fn shamir_search(p: &Params, ctx: Ctx) -> CliResult<Outcome> {
    let fc = basis_of(p)?;
    let start = Instant::now();
    let rep = search(&fc);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let control = cnf_witness_check()?;
    let mut results = json!({
        "servers": rep.servers,
        "secrets": rep.secrets,
        "share_field": rep.share_field,
        "basis": rep.basis,
        "point_sets": point_sets().len(),
        "candidates": rep.candidates,
        "witnesses": rep.witnesses.iter().map(|w| json!({ "alphas": w.alphas, "y": w.y })).collect::<Vec<_>>(),
        "control": {
            "correct": control.correct,
            "private": control.private,
            "hss_valid": control.hss_valid,
            "download_bits": control.download_bits,
            "rate": ratio(control.rate),
        },
    });
    if ctx.timing {
        results["duration_ms"] = real(elapsed);
    }
    Ok(Outcome::json(results))
}

pub fn rate_bounds(p: &Params) -> CliResult<Outcome> {
    let rows = rate_bound_grid(p.points.unwrap_or(30))?;
    let table_rows = rows
        .iter()
        .map(|r| {
            vec![
                r.family.clone(),
                r.t.to_string(),
                r.k.to_string(),
                r.d.to_string(),
                r.field.to_string(),
                ratio(r.measured),
                ratio(r.bound),
                r.ok().to_string(),
            ]
        })
        .collect();
    let nonmds = corollary_nonmds_check(&NONMDS_GRID)?;
    let nonmds_json: Vec<Value> = nonmds
        .iter()
        .map(|n| {
            json!({
                "k": n.k, "b": n.b, "ell": n.ell, "t": n.t,
                "applicable": n.applicable,
                "singleton_attained": n.singleton_attained,
                "strict": n.applicable && n.strict(),
                "codes_checked": n.codes_checked,
            })
        })
        .collect();
    let all_ok = rows.iter().all(|r| r.ok());
    let results = json!({
        "rows": rows.iter().map(|r| json!({
            "family": r.family, "t": r.t, "k": r.k, "d": r.d, "field": r.field,
            "measured": ratio(r.measured), "bound": ratio(r.bound), "ok": r.ok(),
        })).collect::<Vec<_>>(),
        "all_within_bound": all_ok,
        "nonmds": nonmds_json,
    });
    if !all_ok {
        return Err(CliError::invariant("a constructed scheme exceeds the linear rate bound"));
    }
    Ok(Outcome {
        results,
        table: Some(Table { header: vec!["family", "t", "k", "d", "field", "measured", "bound", "ok"], rows: table_rows }),
    })
}
