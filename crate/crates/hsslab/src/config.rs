//! Experiment parameters from flags, optionally merged over a TOML file.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::report::Format;

/// Every knob any subcommand reads. Unset fields fall back to the TOML
/// file, then to the subcommand's default.
#[derive(Args, Serialize, Deserialize, Default, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// HSS family for `rates`: cnf or shamir
    #[arg(long)]
    pub family: Option<String>,
    /// Output-share scheme for `sw` and `shss`: greedy, shamir or symmetric
    #[arg(long)]
    pub scheme: Option<String>,
    /// Black-box transform: two-server, packing or cnf
    #[arg(long)]
    pub transform: Option<String>,
    /// Field order q (a prime power)
    #[arg(long)]
    pub field: Option<u64>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Variables per polynomial
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of evaluations (block length for `sw`)
    #[arg(long)]
    pub ell: Option<usize>,
    /// Field bundling degree for the Shamir family
    #[arg(long)]
    pub b: Option<usize>,
    /// Database size
    #[arg(long)]
    pub n: Option<usize>,
    /// Repetitions per PIR record
    #[arg(long)]
    pub w: Option<usize>,
    /// Record index, counted from 1
    #[arg(long)]
    pub index: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Relative headroom added to the Slepian-Wolf allocation
    #[arg(long)]
    pub slack: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rows in the rate-bound grid
    #[arg(long)]
    pub points: Option<usize>,
    /// Polynomials separated by ';', e.g. "x1*x2 + 3; x1^2"
    #[arg(long)]
    pub poly: Option<String>,
    /// F_8 basis over F_2 for the Shamir search, e.g. "1,3,7"
    #[arg(long)]
    pub basis: Option<String>,
    /// Which checks `rates` runs: all, cert or none
    #[arg(long)]
    pub checks: Option<String>,
    /// Include a seeded transcript in the report
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub transcript: Option<bool>,
    /// Database file for `pir`
    #[arg(long)]
    pub db: Option<PathBuf>,
    /// host:port for `pir serve` and `pir fetch`
    #[arg(long)]
    pub addr: Option<String>,
    /// Stop `pir serve` after this many connections
    #[arg(long)]
    pub requests: Option<usize>,
}

impl Params {
    /// Fills unset fields from a TOML file of the same keys.
    pub fn merged_over(self, file: Option<&Path>) -> CliResult<Params> {
        let Some(path) = file else { return Ok(self) };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        let base: toml::Table = text.parse()?;
        let mut map = match serde_json::to_value(base)? {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        if let Value::Object(flags) = serde_json::to_value(&self)? {
            for (k, v) in flags {
                if !v.is_null() {
                    map.insert(k, v);
                }
            }
        }
        Ok(serde_json::from_value(Value::Object(map))?)
    }

    /// The set parameters, for the report's echo.
    pub fn echo(&self) -> Value {
        let mut out = Map::new();
        if let Ok(Value::Object(m)) = serde_json::to_value(self) {
            for (k, v) in m {
                if !v.is_null() {
                    out.insert(k, v);
                }
            }
        }
        Value::Object(out)
    }
}

pub fn need<T: Copy>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::invalid(format!("missing --{name}")))
}

/// A fully resolved run: subcommand, parameters, destination and format.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub command: String,
    pub params: Params,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub timing: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "k = 7\nt = 2\nfamily = \"cnf\"\neps = 2.5\n").unwrap();
        let flags = Params { k: Some(5), ..Params::default() };
        let p = flags.merged_over(Some(&path)).unwrap();
        assert_eq!((p.k, p.t, p.family.as_deref(), p.eps), (Some(5), Some(2), Some("cnf"), Some(2.5)));
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert_eq!(Params::default().merged_over(Some(&path)).unwrap_err().code, 2);
    }
}
