//! Command-line front end for `riembed-core`.
//!
//! Exit codes: 0 success (or `holds`), 1 failure (or `fails`), 2 inconclusive,
//! 64 usage error.

pub mod commands;
pub mod config;
pub mod output;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::output::Format;
use crate::spec::SpecError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Spec(#[from] SpecError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] riembed_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use riembed_core::Error as E;
        match self {
            Self::Usage(_) | Self::Spec(_) | Self::Config(_) => EXIT_USAGE,
            Self::Core(E::InvalidInput(_) | E::Domain(_) | E::Inadmissible(_)) => EXIT_USAGE,
            Self::Core(_) | Self::Io(_) => EXIT_FAIL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "riembed", version, about = "Sobolev embeddings into Morrey and Campanato spaces on rearrangement-invariant spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide an embedding criterion for a space and a weight.
    Check(Common),
    /// Sample the optimal target weight and fit its asymptotics.
    Target {
        kind: TargetKind,
        #[command(flatten)]
        common: Common,
    },
    /// Norm of a profile in the optimal domain or in a Marcinkiewicz space.
    DomainNorm {
        kind: DomainKind,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce the exponent table.
    Table(Common),
    /// Extremal-family and radial witnesses.
    Witness(Common),
    /// Run the built-in suite twice and compare the reports.
    Selftest(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetKind {
    Morrey,
    Campanato,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Morrey,
    Campanato,
    Marcinkiewicz,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML file with default values for the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Space, e.g. `L:2`, `Lw:3`, `Lor:2:1`, `Orl:powlog:2:1`, `Zyg:2:1`, `Linf`.
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Weight, e.g. `pow:-0.5`, `powlog:0:0.5`, `powloglog:0:0:0.5`, `one`.
    #[arg(long)]
    pub weight: Option<String>,
    /// Modulus of continuity for `--theorem holder`.
    #[arg(long)]
    pub sigma: Option<String>,
    /// Step profile, e.g. `ind:0.25`, `pow:0.5:1e-8`, `steps:2@0.5,1@0.5`.
    #[arg(long)]
    pub profile: Option<String>,
    /// morrey, vanishing-morrey, campanato, vanishing-campanato or holder.
    #[arg(long)]
    pub theorem: Option<String>,
    #[arg(long)]
    pub grid_eps: Option<f64>,
    #[arg(long)]
    pub grid_density: Option<usize>,
    /// Fit window `lo:hi`.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Restrict the table to these row keys.
    #[arg(long)]
    pub only: Vec<String>,
}

impl Common {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            space: self.space.clone(),
            n: self.n,
            m: self.m,
            k: self.k,
            weight: self.weight.clone(),
            sigma: self.sigma.clone(),
            profile: self.profile.clone(),
            theorem: self.theorem.clone(),
            grid_eps: self.grid_eps,
            grid_density: self.grid_density,
            window: self.window.clone(),
            format: self.format,
            seed: self.seed,
            only: (!self.only.is_empty()).then(|| self.only.clone()),
        };
        let cfg = base.overlay(flags);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            if code == EXIT_OK {
                let _ = write!(out, "{}", e.render());
            } else {
                let _ = write!(err, "{}", e.render());
            }
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Check(c) => commands::check(&c.resolve()?, out),
        Command::Target { kind, common } => commands::target(*kind, &common.resolve()?, out),
        Command::DomainNorm { kind, common } => commands::domain_norm(*kind, &common.resolve()?, out),
        Command::Table(c) => commands::table(&c.resolve()?, out),
        Command::Witness(c) => commands::witness(&c.resolve()?, out),
        Command::Selftest(c) => commands::selftest(&c.resolve()?, out),
    }
}
