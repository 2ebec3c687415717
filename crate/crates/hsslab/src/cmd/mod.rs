//! One adapter per subcommand: read parameters, call the core, shape the
//! results.

use std::sync::Arc;

use hsslab_core::{Field, FieldCtx};

use crate::cli::{AuditCmd, BbCmd, Command, PirCmd, ShssCmd, SwCmd};
use crate::config::{need, Params};
use crate::error::CliResult;
use crate::report::Outcome;

pub mod audit;
pub mod bb;
pub mod pir;
pub mod rates;
pub mod sw;

/// Run-wide switches that are not experiment parameters.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ctx {
    pub timing: bool,
}

pub fn dispatch(cmd: &Command, p: &Params, ctx: Ctx) -> CliResult<Outcome> {
    match cmd {
        Command::Rates(_) => rates::run(p),
        Command::Pir(PirCmd::GenDb(_)) => pir::gen_db(p),
        Command::Pir(PirCmd::Serve(_)) => pir::serve_cmd(p),
        Command::Pir(PirCmd::Fetch(_)) => pir::fetch(p),
        Command::Sw(SwCmd::Rates(_)) => sw::rates(p),
        Command::Sw(SwCmd::Run(_)) => sw::run(p),
        Command::Sw(SwCmd::Assignments(_)) => sw::assignments(p),
        Command::Sw(SwCmd::Warmup(_)) => sw::warmup(p),
        Command::Shss(ShssCmd::Audit(_)) => sw::shss(p),
        Command::Audit(AuditCmd::ShamirSearch(_)) => audit::shamir_search(p, ctx),
        Command::Audit(AuditCmd::RateBounds(_)) => audit::rate_bounds(p),
        Command::Bb(BbCmd::Validate(_)) => bb::validate(p),
        Command::Bb(BbCmd::Demo(_)) => bb::demo(p),
    }
}

pub fn field_of(p: &Params) -> CliResult<Field> {
    let q = need(p.field, "field")?;
    Ok(Arc::new(FieldCtx::of_order(q)?))
}

pub fn seed(p: &Params) -> u64 {
    p.seed.unwrap_or(0)
}
