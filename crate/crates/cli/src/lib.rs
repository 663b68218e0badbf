//! Command-line front end for `agency-core`: exhibit reproductions, batch
//! identity verification, ad-hoc objective evaluation and random model
//! generation, with table, CSV and JSON output.
//!
//! ```text
//! agency-bridge <command> [--model PATH] [--objective NAME[:PARAM=VAL,…]] [--seeds A..B]
//!               [--tol NAME=VAL …] [--format table|csv|json] [--out PATH]
//! ```
//!
//! Exit status: 0 when every check passed, 1 when any check failed, 2 on a
//! configuration or input error.

pub mod model_io;
pub mod objective;
pub mod report;
mod run;

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use model_io::{load_model, model_to_json, parse_model, save_model, ModelFileError};
pub use objective::ObjectiveDescriptor;
pub use report::{emit_report, fmt_number, render_reports, render_reproduction, Format, CSV_COLUMNS};
pub use run::run;

/// Exit status for a run in which every check passed.
pub const EXIT_SUCCESS: i32 = 0;
/// Exit status for a run in which some check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for configuration and input errors.
pub const EXIT_CONFIG_ERROR: i32 = 2;

/// A problem with the command line or its inputs.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl ConfigError {
    pub fn from_core(e: agency_core::Error) -> Self {
        Self(e.to_string())
    }
}

/// Inclusive seed range written `A..B`, `A..=B` or `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedRange {
    pub start: u64,
    pub end: u64,
}

impl SeedRange {
    pub fn iter(&self) -> RangeInclusive<u64> {
        self.start..=self.end
    }

    pub fn single(&self) -> Option<u64> {
        (self.start == self.end).then_some(self.start)
    }
}

impl FromStr for SeedRange {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim().parse::<u64>().map_err(|_| ConfigError(format!("bad seed `{t}` in `{s}` (expected A..B)")))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if start > end {
            return Err(ConfigError(format!("empty seed range `{s}`")));
        }
        Ok(Self { start, end })
    }
}

impl fmt::Display for SeedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// `NAME=VAL` tolerance override.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceOverride {
    pub name: String,
    pub value: f64,
}

impl FromStr for ToleranceOverride {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, value) = s.split_once('=').ok_or_else(|| ConfigError(format!("tolerance `{s}` is not NAME=VAL")))?;
        let value: f64 = value.trim().parse().map_err(|_| ConfigError(format!("tolerance `{s}`: bad number")))?;
        if !(value >= 0.0 && value.is_finite()) {
            return Err(ConfigError(format!("tolerance `{s}` must be finite and >= 0")));
        }
        Ok(Self { name: name.trim().to_string(), value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReproduceTarget {
    Paraglider,
    Tmaze1,
    Tmaze2,
    Stpetersburg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenerateTarget {
    /// Random MDP of a batch seed.
    Mdp,
    /// Random POMDP of a batch seed.
    Pomdp,
    Paraglider,
    Tmaze1,
    Tmaze2,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Recompute an exhibit and check it against its reference values.
    Reproduce {
        #[arg(value_enum)]
        target: ReproduceTarget,
    },
    /// Check the identities on the seeded random instances.
    ///
    /// TARGET is `all` or one identity name.
    Verify { target: String },
    /// Evaluate every action of a model under an objective (requires --model and --objective).
    Evaluate,
    /// Write a model file: a batch seed's random instance or an exhibit.
    Generate {
        #[arg(value_enum)]
        target: GenerateTarget,
    },
}

/// Parsed command line.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "agency-bridge",
    version,
    about = "Expected utility, expected free energy and bounded rationality on finite MDPs and POMDPs"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Model file (JSON).
    #[arg(long = "model", value_name = "PATH", global = true)]
    pub model_path: Option<PathBuf>,
    /// Objective, e.g. `efe-mdp`, `expected-utility:c=0.5`, `feef:beta=2`.
    #[arg(long, value_name = "NAME[:PARAM=VAL,…]", global = true)]
    pub objective: Option<ObjectiveDescriptor>,
    /// Inclusive seed range.
    #[arg(long, value_name = "A..B", global = true)]
    pub seeds: Option<SeedRange>,
    /// Tolerance override for a named identity or check (repeatable).
    #[arg(long = "tol", value_name = "NAME=VAL", global = true)]
    pub tolerances: Vec<ToleranceOverride>,
    #[arg(long = "format", value_enum, default_value = "table", global = true)]
    pub output: Format,
    /// Write the output here instead of stdout.
    #[arg(long = "out", value_name = "PATH", global = true)]
    pub out_path: Option<PathBuf>,
}
