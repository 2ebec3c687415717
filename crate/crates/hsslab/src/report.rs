//! Report assembly and number formatting.

use num_rational::Ratio;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Exact rational as "p/q".
pub fn ratio(r: Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Six significant digits, fixed notation.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.starts_with("-0") && s.trim_start_matches(['-', '0', '.']).is_empty() {
        return s[1..].to_string();
    }
    s
}

/// A real for JSON output, rounded to six significant digits.
pub fn real(x: f64) -> Value {
    sig6(x).parse::<f64>().map(Value::from).unwrap_or(Value::Null)
}

pub fn bits(v: &[u8]) -> String {
    v.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// What a subcommand hands back before it is wrapped into a report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub results: Value,
    pub table: Option<Table>,
}

impl Outcome {
    pub fn json(results: Value) -> Outcome {
        Outcome { results, table: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Report {
    pub command: String,
    pub params: Value,
    pub outcome: Outcome,
    pub runtime_ms: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("command".into(), json!(self.command));
        m.insert("params".into(), self.params.clone());
        m.insert("results".into(), self.outcome.results.clone());
        if let Some(t) = self.runtime_ms {
            m.insert("runtime_ms".into(), real(t));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let table = self
            .outcome
            .table
            .as_ref()
            .ok_or_else(|| CliError::invalid(format!("`{}` has no tabular output; use --format json", self.command)))?;
        let mut out = format!("# schema_version={} command={}", SCHEMA_VERSION, self.command);
        if let Value::Object(m) = &self.params {
            for (k, v) in m {
                match v {
                    Value::String(s) => out.push_str(&format!(" {k}={s}")),
                    other => out.push_str(&format!(" {k}={other}")),
                }
            }
        }
        out.push('\n');
        if let Some(t) = self.runtime_ms {
            out.push_str(&format!("# runtime_ms={}\n", sig6(t)));
        }
        out.push_str(&table.header.join(","));
        out.push('\n');
        for row in &table.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}
