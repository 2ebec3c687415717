use std::process::ExitCode;

use clap::Parser;
use hsslab::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = hsslab::init_threads().and_then(|_| hsslab::execute(&cli)).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(Into::into),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
