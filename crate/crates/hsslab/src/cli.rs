use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::Params;
use crate::report::Format;

#[derive(Parser, Debug)]
#[command(name = "hsslab", version, about = "Homomorphic secret sharing experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML file with default parameters (flags win)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Leave runtimes out of the report
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a CNF or Shamir HSS, meter its rate and check it exhaustively
    Rates(Params),
    #[command(subcommand)]
    Pir(PirCmd),
    #[command(subcommand)]
    Sw(SwCmd),
    #[command(subcommand)]
    Shss(ShssCmd),
    #[command(subcommand)]
    Audit(AuditCmd),
    #[command(subcommand)]
    Bb(BbCmd),
}

#[derive(Subcommand, Debug)]
pub enum PirCmd {
    /// Write a random database file
    GenDb(Params),
    /// Answer framed queries over TCP
    Serve(Params),
    /// Retrieve one record, over TCP with --addr or in-process with --db
    Fetch(Params),
}

#[derive(Subcommand, Debug)]
pub enum SwCmd {
    /// Slepian-Wolf constraint table for an output-share scheme
    Rates(Params),
    /// Encode/decode experiment at a finite block length
    Run(Params),
    /// All Eval assignments of the 3-server AND
    Assignments(Params),
    /// Shamir warm-up compressor: lossless check and mean length
    Warmup(Params),
}

#[derive(Subcommand, Debug)]
pub enum ShssCmd {
    /// Symmetric privacy verdict with a witness on failure
    Audit(Params),
}

#[derive(Subcommand, Debug)]
pub enum AuditCmd {
    /// Exhaustive search for a 5-server Shamir scheme with one-bit outputs
    ShamirSearch(Params),
    /// Measured rates against the linear bound, plus non-MDS strictness
    RateBounds(Params),
}

#[derive(Subcommand, Debug)]
pub enum BbCmd {
    /// Check replication and conversion maps
    Validate(Params),
    /// Run a transform on a mock additive HSS and meter the transcript
    Demo(Params),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rates(_) => "rates",
            Command::Pir(PirCmd::GenDb(_)) => "pir gen-db",
            Command::Pir(PirCmd::Serve(_)) => "pir serve",
            Command::Pir(PirCmd::Fetch(_)) => "pir fetch",
            Command::Sw(SwCmd::Rates(_)) => "sw rates",
            Command::Sw(SwCmd::Run(_)) => "sw run",
            Command::Sw(SwCmd::Assignments(_)) => "sw assignments",
            Command::Sw(SwCmd::Warmup(_)) => "sw warmup",
            Command::Shss(ShssCmd::Audit(_)) => "shss audit",
            Command::Audit(AuditCmd::ShamirSearch(_)) => "audit shamir-search",
            Command::Audit(AuditCmd::RateBounds(_)) => "audit rate-bounds",
            Command::Bb(BbCmd::Validate(_)) => "bb validate",
            Command::Bb(BbCmd::Demo(_)) => "bb demo",
        }
    }

    pub fn params(&self) -> &Params {
        match self {
            Command::Rates(p)
            | Command::Pir(PirCmd::GenDb(p) | PirCmd::Serve(p) | PirCmd::Fetch(p))
            | Command::Sw(SwCmd::Rates(p) | SwCmd::Run(p) | SwCmd::Assignments(p) | SwCmd::Warmup(p))
            | Command::Shss(ShssCmd::Audit(p))
            | Command::Audit(AuditCmd::ShamirSearch(p) | AuditCmd::RateBounds(p))
            | Command::Bb(BbCmd::Validate(p) | BbCmd::Demo(p)) => p,
        }
    }
}
