//! Command-line flags and their mapping onto [`ExperimentConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Command, ExperimentConfig, SequenceKind};

/// Experiments on orthogonal polynomials on the unit circle.
#[derive(Debug, Parser)]
#[command(name = "opuc", version)]
pub struct Cli {
    /// Subcommand to run.
    #[command(subcommand)]
    pub command: CliCommand,
}

/// The subcommands.
#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Tabulate log w(eta) and its tail fluctuation over an angle grid.
    Density(Flags),
    /// Z_m of power sequences over truncation lengths, with trend labels.
    SumruleScan(Flags),
    /// Fit the growth exponent of |log w(theta)| as theta -> 0.
    ExponentFit(Flags),
    /// Run the randomized property suites.
    Verify(Flags),
}

/// Sequence family selectable with `--seq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeqArg {
    /// `(n+2)^(-1/(2m))`.
    Test,
    /// `c (n+1)^(-beta)`.
    Power,
}

/// Flags shared by every subcommand; unset flags take the command's defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Order of the weight (1 - cos theta)^m.
    #[arg(long)]
    pub m: Option<u32>,
    /// Sequence family.
    #[arg(long, value_enum)]
    pub seq: Option<SeqArg>,
    /// Decay exponents, comma separated.
    #[arg(long, value_parser = parse_floats)]
    pub beta: Option<FloatList>,
    /// Amplitude of power sequences.
    #[arg(long)]
    pub c: Option<f64>,
    /// Truncation lengths, comma separated; accepts forms like 1e5.
    #[arg(long = "N", value_delimiter = ',', value_parser = parse_length)]
    pub n: Option<Vec<usize>>,
    /// Smallest angle.
    #[arg(long)]
    pub theta_min: Option<f64>,
    /// Grid points.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Cutoff refinement levels of the sum-rule quadrature.
    #[arg(long)]
    pub refine_levels: Option<usize>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized suites.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trial budget for randomized suites.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// A comma-separated list of floats; the empty string is the empty list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FloatList(pub Vec<f64>);

/// Parses a [`FloatList`].
pub fn parse_floats(s: &str) -> Result<FloatList, String> {
    if s.trim().is_empty() {
        return Ok(FloatList::default());
    }
    s.split(',')
        .map(|part| part.trim().parse::<f64>().map_err(|_| format!("`{part}` is not a number")))
        .collect::<Result<_, _>>()
        .map(FloatList)
}

/// Parses a non-negative integer, allowing exponent notation such as `1e5`.
pub fn parse_length(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.trim().parse::<usize>() {
        return Ok(n);
    }
    let x: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x >= 0.0 && x.fract() == 0.0 && x <= usize::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(format!("`{s}` is not a non-negative integer"))
    }
}

impl CliCommand {
    /// The configuration these flags describe, before validation.
    pub fn into_config(self) -> ExperimentConfig {
        let (command, flags) = match self {
            CliCommand::Density(f) => (Command::Density, f),
            CliCommand::SumruleScan(f) => (Command::SumruleScan, f),
            CliCommand::ExponentFit(f) => (Command::ExponentFit, f),
            CliCommand::Verify(f) => (Command::Verify, f),
        };
        let mut config = ExperimentConfig::defaults(command);
        if let Some(m) = flags.m {
            config.m = m;
        }
        if let Some(seq) = flags.seq {
            config.sequence.kind = match seq {
                SeqArg::Test => SequenceKind::Test,
                SeqArg::Power => SequenceKind::Power,
            };
        }
        if let Some(beta) = flags.beta {
            config.sequence.beta = beta.0;
        }
        if let Some(c) = flags.c {
            config.sequence.c = c;
        }
        if let Some(n) = flags.n {
            config.sequence.n = n;
        }
        if let Some(t) = flags.theta_min {
            config.grid.theta_min = t;
        }
        if let Some(p) = flags.grid_points {
            config.grid.points = p;
        }
        if let Some(r) = flags.refine_levels {
            config.grid.refine_levels = r;
        }
        config.out = flags.out.or(config.out);
        if let Some(seed) = flags.seed {
            config.seed = seed;
        }
        if let Some(trials) = flags.trials {
            config.trials = trials;
        }
        config.jobs = flags.jobs.or(config.jobs);
        config
    }
}
