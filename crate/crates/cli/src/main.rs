use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use repstab_cli::args::{Cli, Command};
use repstab_cli::cache::Cache;
use repstab_cli::config::RunConfig;
use repstab_cli::report::Document;
use repstab_cli::{commands, CliError, EXIT_CHECK_FAILED, EXIT_OK};

fn run(cli: &Cli) -> Result<Document, CliError> {
    let config = RunConfig {
        format: cli.global.format,
        cache_dir: cli.global.cache_dir.clone(),
        jobs: cli.global.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    if cli.global.unguarded {
        repstab_core::repstab::set_size_guard(false);
    }
    let cache = match &config.cache_dir {
        Some(dir) => Cache::open(dir)?,
        None => Cache::disabled(),
    };
    match &cli.command {
        Command::Compute(a) => commands::compute(a, &config, &cache),
        Command::Stability(a) => commands::stability(a),
        Command::FitCharpoly(a) => commands::fit_charpoly(a),
        Command::FitBetti(a) => commands::fit_betti(a),
        Command::Coinvariants(a) => commands::coinvariants(a),
        Command::GenDegree(a) => commands::gen_degree(a, &config),
        Command::Selftest(a) => commands::selftest(a, &config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli).and_then(|doc| Ok((doc.render(cli.global.format)?, doc.passed))) {
        Ok((out, passed)) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            if passed {
                EXIT_OK
            } else {
                eprintln!("error: a checked result did not reproduce");
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
