use std::process::ExitCode;

use clap::Parser;
use rarenet_core::{Error, ErrorClass};

mod args;
mod commands;
mod output;
mod source;

use args::{Cli, Command};

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Input => 2,
        ErrorClass::Capacity => 3,
        ErrorClass::Internal => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if cli.verbose { "info" } else { "warn" }))
        .init();
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(4);
        }
    }
    let result = match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Optimize(a) => commands::optimize(a),
        Command::Inject(a) => commands::inject(a),
        Command::Gentest(a) => commands::gentest(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Compare(a) => commands::compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
