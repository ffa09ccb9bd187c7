use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use folichar::config::Config;
use folichar::gvnum::ExecMode;
use folichar::report::Summary;
use folichar::suite::{self, parse_levels, Group, Overrides, SuiteError};

#[derive(Parser)]
#[command(name = "folichar", version, about = "Characteristic classes of foliations: exact and numerical checks")]
struct Cli {
    /// TOML config; missing fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON summary (or the dump) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Inclusive nerve level range, e.g. 0..3.
    #[arg(long, global = true, value_parser = levels_arg)]
    levels: Option<[usize; 2]>,
    /// Codimension q (at least 1).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=8))]
    q: Option<u64>,
    /// Chern polynomial for the Bott checks, e.g. c1^2 or c1*c2.
    #[arg(long, global = true)]
    poly: Option<String>,
    /// Run everything on one thread in a fixed order.
    #[arg(long, global = true)]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a group of checks, optionally restricted to the listed ids.
    Verify {
        group: VerifyGroup,
        ids: Vec<String>,
    },
    /// Derive a characteristic cochain and run its checks.
    Derive {
        what: DeriveTarget,
        ids: Vec<String>,
    },
    /// Print an element: c<i>, h<i>, dh<i> or psi<level>.
    Dump { element: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyGroup {
    Weil,
    Bott,
    Model,
    Gvcocycle,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeriveTarget {
    Gv,
}

fn levels_arg(s: &str) -> Result<[usize; 2], String> {
    parse_levels(s).map_err(|e| e.to_string())
}

/// Write to stdout, treating a closed pipe as success.
fn say(text: &str) -> Result<(), String> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(format!("cannot write to stdout: {e}")),
        _ => Ok(()),
    }
}

fn emit(summary: &Summary, out: Option<&PathBuf>) -> Result<(), String> {
    say(&summary.text())?;
    match out {
        Some(path) => std::fs::write(path, summary.json() + "\n").map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => say(&(summary.json() + "\n")),
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let err = |e: SuiteError| e.to_string();
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| e.to_string())?,
        None => Config::default(),
    };
    let overrides = Overrides { q: cli.q.map(|q| q as usize), levels: cli.levels, poly: cli.poly.clone() };
    overrides.apply(&mut cfg).map_err(err)?;
    let mode = ExecMode { serial: cli.serial };

    let summary = match cli.command {
        Command::Verify { group, ids } => {
            let groups: Vec<Group> = match group {
                VerifyGroup::Weil => vec![Group::Weil],
                VerifyGroup::Bott => vec![Group::Bott],
                VerifyGroup::Model => vec![Group::Model],
                VerifyGroup::Gvcocycle => vec![Group::GvCocycle],
                VerifyGroup::All => Group::ALL.to_vec(),
            };
            suite::verify(&cfg, &groups, &ids, mode).map_err(err)?
        }
        Command::Derive { what: DeriveTarget::Gv, ids } => suite::derive_gv(&cfg, &ids, mode).map_err(err)?,
        Command::Dump { element } => {
            let text = suite::dump(&element, overrides.q).map_err(err)?;
            match &cli.out {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("cannot write {}: {e}", p.display()))?,
                None => say(&text)?,
            }
            return Ok(true);
        }
    };
    emit(&summary, cli.out.as_ref())?;
    Ok(summary.ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
