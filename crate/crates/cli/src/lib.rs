//! Scenario runner for the `tomita` toolkit.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration or
//! precondition error.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::table::ResultTable;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "tomita", version, about = "Modular theory, concurrence and detector scenarios")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Modular data and property residuals for an algebra and vector.
    Modular(CommonArgs),
    /// Supermultiplet concurrences against 2|αβ|.
    Susy(CommonArgs),
    /// Detector-pair concurrences and CHSH optima.
    Udw(CommonArgs),
    /// Parallel detector grid over r and ⟨h,h⟩ or separations.
    Sweep(CommonArgs),
    /// Full invariant suite; exits 1 on any failure.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML configuration; built-in defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Modular(a) | Command::Susy(a) | Command::Udw(a) | Command::Sweep(a) | Command::Verify(a) => a,
        }
    }
}

/// Config file merged with flag overrides.
pub fn resolve_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(format) = args.format {
        config.format = format;
    }
    if let Some(out) = &args.out {
        config.out = Some(out.display().to_string());
    }
    Ok(config)
}

pub fn render(table: &ResultTable, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn emit(text: &str, out: Option<&str>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(Path::new(path), text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn report_warnings(table: &ResultTable) {
    if let Some(col) = table.column("warning") {
        for w in col.into_iter().filter_map(|c| c.as_text()).filter(|t| !t.is_empty()) {
            eprintln!("{w}");
        }
    }
}

fn execute(command: &Command) -> Result<u8, CliError> {
    let config = resolve_config(command.args())?;
    let (table, code) = match command {
        Command::Modular(_) => (commands::run_modular(&config)?, EXIT_OK),
        Command::Susy(_) => (commands::run_susy(&config)?, EXIT_OK),
        Command::Udw(_) => (commands::run_udw(&config)?, EXIT_OK),
        Command::Sweep(_) => (commands::run_sweep(&config)?, EXIT_OK),
        Command::Verify(_) => {
            let outcome = commands::run_verify(&config)?;
            for w in &outcome.warnings {
                eprintln!("TruncationWarning: {w}");
            }
            if outcome.failures.is_empty() {
                eprintln!("verify: all invariants passed");
                (outcome.table, EXIT_OK)
            } else {
                eprintln!("verify: failing properties: {}", outcome.failures.join(", "));
                (outcome.table, EXIT_FAILURE)
            }
        }
    };
    report_warnings(&table);
    // render fully before writing so errors never leave partial output
    let text = render(&table, config.format)?;
    emit(&text, config.out.as_deref())?;
    Ok(code)
}

pub fn run(cli: &Cli) -> u8 {
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
