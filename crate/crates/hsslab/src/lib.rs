//! Experiment driver for hsslab-core: parameter handling, report writing,
//! the PIR transport and the `hsslab` command line.

pub mod cli;
pub mod cmd;
pub mod config;
pub mod error;
pub mod report;

use std::time::Instant;

use cli::Cli;
use config::ExperimentConfig;
use error::CliResult;
use report::{Format, Report};

pub fn config_of(cli: &Cli) -> CliResult<ExperimentConfig> {
    let params = cli.command.params().clone().merged_over(cli.config.as_deref())?;
    Ok(ExperimentConfig {
        command: cli.command.name().to_string(),
        params,
        out: cli.out.clone(),
        format: cli.format,
        timing: !cli.no_timing,
    })
}

/// Tables are CSV by default, everything else JSON.
pub fn default_format(command: &str) -> Format {
    match command {
        "rates" | "sw rates" | "audit rate-bounds" => Format::Csv,
        _ => Format::Json,
    }
}

/// Runs one subcommand and renders its report.
pub fn execute(cli: &Cli) -> CliResult<String> {
    let cfg = config_of(cli)?;
    let start = Instant::now();
    let outcome = cmd::dispatch(&cli.command, &cfg.params, cmd::Ctx { timing: cfg.timing })?;
    let runtime_ms = cfg.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let report = Report { command: cfg.command.clone(), params: cfg.params.echo(), outcome, runtime_ms };
    report.render(cfg.format.unwrap_or_else(|| default_format(&cfg.command)))
}

/// Caps the rayon pool at HSSLAB_THREADS workers when set.
pub fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("HSSLAB_THREADS") {
        let n: usize = v.parse().map_err(|_| error::CliError::invalid(format!("HSSLAB_THREADS=`{v}` is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| error::CliError::invalid(format!("thread pool: {e}")))?;
    }
    Ok(())
}
