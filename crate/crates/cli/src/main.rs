mod args;
mod commands;
mod config;
mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use majority_core::Error;

use args::{Cli, Command, Suite};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Flag, then `MAJ_SEED`, then the config file, then 0.
fn resolve_seed(flag: Option<u64>, env: Option<String>, file: Option<&str>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(s) = env {
        return s.trim().parse().map_err(|_| format!("MAJ_SEED: not an unsigned integer: {s:?}"));
    }
    if let Some(s) = file {
        return s.parse().map_err(|_| format!("config seed: not an unsigned integer: {s:?}"));
    }
    Ok(0)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) | Error::Timeout { .. } => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Period => "period",
        Suite::Potential => "potential",
        Suite::Mixing => "mixing",
        Suite::Cycle => "cycle",
        Suite::Stubbornness => "stubbornness",
    }
}

fn execute(cli: &Cli, seed: u64, out: &mut dyn Write) -> Result<bool, Error> {
    match &cli.command {
        Command::Generate(a) => commands::generate(a, seed, out).map(|_| true),
        Command::Simulate(a) => commands::simulate(a, seed, out).map(|_| true),
        Command::Elites(a) => commands::elites(a, seed, out).map(|_| true),
        Command::Sweep(a) => {
            let ok = commands::sweep(a, seed, out)?;
            if !ok {
                eprintln!("every trial failed to reach a cycle");
            }
            Ok(ok)
        }
        Command::Conjecture(a) => {
            let ok = commands::conjecture(a, seed, out)?;
            if !ok {
                eprintln!("every trial failed to reach a cycle");
            }
            Ok(ok)
        }
        Command::Verify(a) => {
            let res = verify::verify(a, seed, out)?;
            let line = format!(
                "{} {}: {}",
                if res.passed { "PASS" } else { "FAIL" },
                suite_name(a.suite),
                res.detail
            );
            // the certificate occupies stdout when it is written there
            if a.suite == Suite::Potential && commands::has_source(&a.graph) && cli.output.is_none() {
                eprintln!("{line}");
            } else {
                writeln!(out, "{line}")?;
            }
            Ok(res.passed)
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let cfg = match config::load(&argv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = Cli::parse_from(config::inject(argv, &cfg));

    let seed = match resolve_seed(cli.seed, std::env::var("MAJ_SEED").ok(), cfg.seed.as_deref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let outcome = execute(&cli, seed, &mut *out).and_then(|ok| {
        out.flush()?;
        Ok(ok)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
