use std::process::ExitCode;

use agency_bridge::{run, RunConfig, EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, EXIT_SUCCESS};
use clap::Parser;

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let code = match run(&config) {
        Ok(true) => EXIT_SUCCESS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_CONFIG_ERROR
        }
    };
    ExitCode::from(code as u8)
}
