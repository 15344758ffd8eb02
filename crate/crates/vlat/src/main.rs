use std::process::ExitCode;

use clap::Parser;
use vlat::cli::{run, Cli};
use vlat::json::to_canonical_string;
use vlat::exit;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("VL_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let code = match run(&cli) {
        Ok(outcome) => {
            let text = to_canonical_string(&outcome.report);
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Err(e) => {
                    eprintln!("vlat: cannot write report: {e}");
                    exit::INPUT
                }
                Ok(()) if outcome.violation => exit::VIOLATION,
                Ok(()) => exit::PASS,
            }
        }
        Err(e) => {
            eprintln!("vlat: {e}");
            exit::INPUT
        }
    };
    ExitCode::from(code as u8)
}
