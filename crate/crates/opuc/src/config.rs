//! Validated experiment configuration.
//!
//! Every command is described by one [`ExperimentConfig`]. Values that were
//! not given on the command line take the per-command defaults from
//! [`ExperimentConfig::defaults`]; [`ExperimentConfig::validate`] runs before
//! any computation and names the offending flag on failure.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use opuc_core::quadrature::GridSpec;
use opuc_core::VerblunskySequence;

use crate::error::{CliError, Result};

/// Largest truncation length accepted for any command.
pub const MAX_LENGTH: usize = 100_000_000;

/// The four runner commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// `eta,log_w,fluctuation` over an angle grid.
    Density,
    /// The equivalence experiment over `beta` and `N` lists.
    SumruleScan,
    /// Growth-exponent fit of `|log w|` toward `θ = 0`.
    ExponentFit,
    /// Randomized property suites.
    Verify,
}

impl Command {
    /// The command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            Command::Density => "density",
            Command::SumruleScan => "sumrule-scan",
            Command::ExponentFit => "exponent-fit",
            Command::Verify => "verify",
        }
    }
}

/// Which family of Verblunsky coefficients to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    /// `α_n = (n+2)^{−1/(2m)}`.
    Test,
    /// `α_n = c·(n+1)^{−β}`.
    Power,
}

impl SequenceKind {
    /// The command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::Test => "test",
            SequenceKind::Power => "power",
        }
    }
}

/// Sequence parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec {
    /// Family.
    pub kind: SequenceKind,
    /// Decay exponents (power family).
    pub beta: Vec<f64>,
    /// Amplitude (power family).
    pub c: f64,
    /// Truncation lengths.
    pub n: Vec<usize>,
}

/// Angle-grid parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Smallest angle (density, exponent fit) or finest cutoff (scan).
    pub theta_min: f64,
    /// Number of grid points (density, exponent fit) or quadrature nodes
    /// before grading (scan).
    pub points: usize,
    /// Cutoff refinements for the scan's Cauchy test.
    pub refine_levels: usize,
}

/// A complete, validated description of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// What to run.
    pub command: Command,
    /// Order `m` of the weight `(1 − cos θ)^m`, and the test-sequence parameter.
    pub m: u32,
    /// Sequence parameters.
    pub sequence: SequenceSpec,
    /// Grid parameters.
    pub grid: GridConfig,
    /// Output file.
    pub out: Option<PathBuf>,
    /// Seed for randomized suites.
    pub seed: u64,
    /// Trial count for randomized suites.
    pub trials: usize,
    /// Worker threads; `None` uses every available core.
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults for `command`.
    pub fn defaults(command: Command) -> Self {
        let (kind, n, grid) = match command {
            Command::Density => (
                SequenceKind::Test,
                vec![10_000],
                GridConfig {
                    theta_min: 0.1,
                    points: 200,
                    refine_levels: 3,
                },
            ),
            Command::SumruleScan => (
                SequenceKind::Power,
                vec![1_000, 10_000, 100_000],
                GridConfig {
                    theta_min: PI * 2f64.powi(-14),
                    points: 1920,
                    refine_levels: 3,
                },
            ),
            Command::ExponentFit => (
                SequenceKind::Test,
                vec![100_000],
                GridConfig {
                    theta_min: 1e-2,
                    points: 21,
                    refine_levels: 3,
                },
            ),
            Command::Verify => (
                SequenceKind::Test,
                vec![10_000],
                GridConfig {
                    theta_min: PI * 2f64.powi(-14),
                    points: 1 << 14,
                    refine_levels: 3,
                },
            ),
        };
        Self {
            command,
            m: 1,
            sequence: SequenceSpec {
                kind,
                beta: match command {
                    Command::SumruleScan => Vec::new(),
                    _ => vec![1.0],
                },
                c: 0.7,
                n,
            },
            grid,
            out: None,
            seed: 1,
            trials: 100_000,
            jobs: None,
        }
    }

    /// Checks every field the command uses.
    pub fn validate(&self) -> Result<()> {
        if let Some(jobs) = self.jobs {
            if jobs == 0 {
                return Err(CliError::config("jobs", "must be >= 1"));
            }
        }
        match self.command {
            Command::Verify => {
                if self.trials == 0 {
                    return Err(CliError::config("trials", "must be >= 1"));
                }
                return Ok(());
            }
            _ => {
                if self.out.is_none() {
                    return Err(CliError::config("out", "an output file is required"));
                }
            }
        }
        self.validate_sequence()?;
        match self.command {
            Command::Density => {
                let t = self.grid.theta_min;
                if !(t > 0.0 && t < PI) {
                    return Err(CliError::config("theta-min", "must lie in (0, pi)"));
                }
                if self.grid.points < 2 {
                    return Err(CliError::config("grid-points", "must be >= 2"));
                }
            }
            Command::ExponentFit => {
                let t = self.grid.theta_min;
                if !(t > 0.0 && 10.0 * t <= PI / 4.0) {
                    return Err(CliError::config(
                        "theta-min",
                        "must be positive with 10 * theta-min <= pi/4 (the fit spans one decade)",
                    ));
                }
                if self.grid.points < 2 {
                    return Err(CliError::config("grid-points", "must be >= 2"));
                }
            }
            Command::SumruleScan => {
                if self.m > 60 {
                    return Err(CliError::config("m", "must be <= 60"));
                }
                self.grid_spec()?;
            }
            Command::Verify => unreachable!(),
        }
        Ok(())
    }

    fn validate_sequence(&self) -> Result<()> {
        let seq = &self.sequence;
        if seq.n.is_empty() {
            return Err(CliError::config("N", "must not be empty"));
        }
        if seq.n.iter().any(|&n| n == 0 || n > MAX_LENGTH) {
            return Err(CliError::config("N", format!("entries must lie in 1..={MAX_LENGTH}")));
        }
        let scan = self.command == Command::SumruleScan;
        if scan {
            if seq.n.windows(2).any(|w| w[1] <= w[0]) {
                return Err(CliError::config("N", "must be strictly increasing"));
            }
        } else if seq.n.len() != 1 {
            return Err(CliError::config("N", format!("{} takes a single length", self.command.name())));
        }
        match seq.kind {
            SequenceKind::Test => {
                if scan {
                    return Err(CliError::config("seq", "sumrule-scan runs over power sequences only"));
                }
                if self.m == 0 {
                    return Err(CliError::config("m", "the test sequence needs m >= 1"));
                }
            }
            SequenceKind::Power => {
                if seq.beta.is_empty() {
                    return Err(CliError::config("beta", "must not be empty"));
                }
                if !scan && seq.beta.len() != 1 {
                    return Err(CliError::config("beta", format!("{} takes a single value", self.command.name())));
                }
                if seq.beta.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
                    return Err(CliError::config("beta", "entries must be positive and finite"));
                }
                if !(seq.c > 0.0 && seq.c < 1.0) {
                    return Err(CliError::config("c", "must lie in (0, 1)"));
                }
            }
        }
        Ok(())
    }

    /// The quadrature grid of a scan.
    pub fn grid_spec(&self) -> Result<GridSpec> {
        if self.grid.points == 0 {
            return Err(CliError::config("grid-points", "must be >= 1"));
        }
        let spec = GridSpec {
            theta_min: self.grid.theta_min,
            refine_levels: self.grid.refine_levels,
            panels: GridSpec::panels_for_points(self.grid.points),
            ..GridSpec::default()
        };
        spec.validate().map_err(|e| match e {
            opuc_core::Error::InvalidParameter { name, reason } => CliError::config(
                match name {
                    "refine_levels" => "refine-levels",
                    "panels" => "grid-points",
                    _ => "theta-min",
                },
                reason,
            ),
            other => other.into(),
        })?;
        Ok(spec)
    }

    /// The single sequence used by `density` and `exponent-fit`.
    pub fn single_sequence(&self) -> Result<VerblunskySequence> {
        let n = self.sequence.n[0];
        Ok(match self.sequence.kind {
            SequenceKind::Test => VerblunskySequence::test_sequence(self.m, n)?,
            SequenceKind::Power => VerblunskySequence::power_sequence(self.sequence.beta[0], self.sequence.c, n)?,
        })
    }

    /// One `#`-prefixed line echoing every field that affects the output.
    pub fn echo(&self) -> String {
        let join = |v: &[String]| v.join(",");
        let mut line = format!("# config: command={} m={}", self.command.name(), self.m);
        let seq = &self.sequence;
        let _ = write!(line, " seq={}", seq.kind.name());
        if seq.kind == SequenceKind::Power {
            let betas: Vec<String> = seq.beta.iter().map(|b| b.to_string()).collect();
            let _ = write!(line, " beta={} c={}", join(&betas), seq.c);
        }
        let ns: Vec<String> = seq.n.iter().map(|n| n.to_string()).collect();
        let _ = write!(
            line,
            " N={} theta_min={} grid_points={} refine_levels={}",
            join(&ns),
            self.grid.theta_min,
            self.grid.points,
            self.grid.refine_levels
        );
        if self.command == Command::Verify {
            let _ = write!(line, " seed={} trials={}", self.seed, self.trials);
        }
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::defaults(Command::SumruleScan);
        cfg.sequence.beta = vec![0.2, 0.3];
        cfg.out = Some("report.csv".into());
        cfg
    }

    fn field(cfg: &ExperimentConfig) -> &'static str {
        match cfg.validate() {
            Err(CliError::Config { field, .. }) => field,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_validate_once_required_fields_are_set() {
        scan().validate().unwrap();
        for command in [Command::Density, Command::ExponentFit] {
            let mut cfg = ExperimentConfig::defaults(command);
            assert_eq!(field(&cfg), "out");
            cfg.out = Some("x.csv".into());
            cfg.validate().unwrap();
        }
        ExperimentConfig::defaults(Command::Verify).validate().unwrap();
    }

    #[test]
    fn offending_fields_are_named() {
        let mut cfg = scan();
        cfg.sequence.beta.clear();
        assert_eq!(field(&cfg), "beta");

        let mut cfg = scan();
        cfg.sequence.n = vec![10_000, 1_000];
        assert_eq!(field(&cfg), "N");

        let mut cfg = scan();
        cfg.sequence.c = 1.0;
        assert_eq!(field(&cfg), "c");

        let mut cfg = scan();
        cfg.grid.refine_levels = 1;
        assert_eq!(field(&cfg), "refine-levels");

        let mut cfg = scan();
        cfg.grid.theta_min = 0.5;
        assert_eq!(field(&cfg), "theta-min");

        let mut cfg = scan();
        cfg.sequence.kind = SequenceKind::Test;
        assert_eq!(field(&cfg), "seq");

        let mut cfg = ExperimentConfig::defaults(Command::Verify);
        cfg.trials = 0;
        assert_eq!(field(&cfg), "trials");

        let mut cfg = ExperimentConfig::defaults(Command::Density);
        cfg.out = Some("x".into());
        cfg.m = 0;
        assert_eq!(field(&cfg), "m");
        cfg.m = 1;
        cfg.jobs = Some(0);
        assert_eq!(field(&cfg), "jobs");
    }

    #[test]
    fn echo_is_stable() {
        assert_eq!(
            scan().echo(),
            "# config: command=sumrule-scan m=1 seq=power beta=0.2,0.3 c=0.7 N=1000,10000,100000 \
             theta_min=0.00019174759848570515 grid_points=1920 refine_levels=3"
        );
    }
}
