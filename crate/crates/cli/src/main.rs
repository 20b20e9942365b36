use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use locuslab_cli::{parse_config_file, run, Command, OUT_DIR_ENV};

/// Eigenvalue loci of banded Toeplitz pencils.
///
/// Exit status: 0 on success, 1 when defects were found (see defects.json),
/// 2 on input errors.
#[derive(Parser, Debug)]
#[command(name = "locuslab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Run configuration (`key = value` lines).
    config: PathBuf,
    /// Output directory [default: $LOCUSLAB_OUT_DIR, else ./locuslab-out].
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = args
        .out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("locuslab-out"));
    let result = parse_config_file(&args.config).and_then(|rc| run(args.command, &rc, &out));
    match result {
        Ok(outcome) => {
            for path in &outcome.written {
                println!("wrote {}", path.display());
            }
            if outcome.defects.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("{} defect(s), see defects.json", outcome.defects.len());
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
