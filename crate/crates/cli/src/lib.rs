//! Front end for the `locuslab` binary: config parsing, commands and
//! artifact writers.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{full_locus, run, Command, DefectEntry, Outcome};
pub use config::{parse_config, parse_config_file, RunConfig, SamplerSpec};
pub use error::CliError;

/// Overrides the default output directory; `--out` still wins.
pub const OUT_DIR_ENV: &str = "LOCUSLAB_OUT_DIR";
