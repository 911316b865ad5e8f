mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use output::Format;

fn init_threads() {
    let Ok(v) = std::env::var("LAMBDA_FORGE_THREADS") else { return };
    match v.parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not size the worker pool: {e}");
            }
        }
        _ => log::warn!("ignoring LAMBDA_FORGE_THREADS={v}"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        // help and version exit 0, malformed input exits 2
        Err(e) => e.exit(),
    };
    init_threads();
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Table
    };
    match commands::run(&cli.command, cli.seed) {
        Ok(out) => {
            print!("{}", out.render(format));
            if out.passed() {
                ExitCode::SUCCESS
            } else {
                let w = serde_json::to_string_pretty(&out.failures).expect("json");
                eprintln!("verification failed (seed {}); witnesses:\n{w}", cli.seed);
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}\n\nRun with --help for usage.");
            ExitCode::from(2)
        }
    }
}
