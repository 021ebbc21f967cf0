//! The four subcommands.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use opuc_core::pruefer::log_density_limit;
use opuc_core::sumrule::{equivalence_rows, exponent_fit, EquivalenceRow, TrendClass};
use rayon::prelude::*;

use crate::config::{Command, ExperimentConfig};
use crate::error::{exit, CliError, Result};
use crate::io::{fmt_f64, log_density_records, report_records, write_replay, CsvDocument, LogDensityRow};
use crate::verify::{run_all, SuiteReport};

/// Default replay path for `verify` when `--out` is absent.
pub const DEFAULT_REPLAY_PATH: &str = "opuc-verify-replay.csv";

/// Fluctuation threshold reported in the density summary.
const DENSITY_TOL: f64 = 1e-3;

/// Exit code plus human-readable summary lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Process exit code.
    pub code: i32,
    /// Lines for standard output.
    pub summary: Vec<String>,
}

/// Validates `config`, then runs its command on a pool of `config.jobs` threads.
pub fn run(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::config("jobs", e.to_string()))?;
    pool.install(|| match config.command {
        Command::Density => run_density(config),
        Command::SumruleScan => run_sumrule_scan(config),
        Command::ExponentFit => run_exponent_fit(config),
        Command::Verify => run_verify(config),
    })
}

fn out_path(config: &ExperimentConfig) -> Result<&Path> {
    config
        .out
        .as_deref()
        .ok_or_else(|| CliError::config("out", "an output file is required"))
}

/// `eta,log_w,fluctuation` over `grid-points` angles evenly spaced on
/// `[θ_min, 2π − θ_min]`.
pub fn run_density(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let out = out_path(config)?;
    let seq = config.single_sequence()?;
    let points = config.grid.points;
    let lo = config.grid.theta_min;
    let step = (TAU - 2.0 * lo) / (points - 1) as f64;
    let rows: Vec<LogDensityRow> = (0..points)
        .into_par_iter()
        .map(|j| {
            let eta = if j + 1 == points { TAU - lo } else { lo + step * j as f64 };
            let limit = log_density_limit(&seq, eta, DENSITY_TOL)?;
            Ok(LogDensityRow {
                eta,
                log_w: limit.log_w,
                fluctuation: limit.fluctuation,
            })
        })
        .collect::<Result<_>>()?;

    let mut doc = CsvDocument::new("density");
    doc.comment(&config.echo());
    log_density_records(&mut doc, &rows)?;
    doc.write(out)?;

    let worst = rows.iter().map(|r| r.fluctuation).fold(0.0, f64::max);
    let settled = rows.iter().filter(|r| r.fluctuation <= DENSITY_TOL).count();
    Ok(Outcome {
        code: exit::PASS,
        summary: vec![
            format!("wrote {} rows to {}", rows.len(), out.display()),
            format!("max fluctuation {worst:.3e}; {settled}/{} rows below {DENSITY_TOL:e}", rows.len()),
        ],
    })
}

/// The equivalence table over every `beta`, one block per value.
///
/// Exits with [`exit::INCONCLUSIVE`] when any block is inconclusive.
pub fn run_sumrule_scan(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let out = out_path(config)?;
    let grid = config.grid_spec()?;
    let seq = &config.sequence;
    let blocks: Vec<Vec<EquivalenceRow>> = seq
        .beta
        .par_iter()
        .map(|&beta| equivalence_rows(config.m, beta, seq.c, &seq.n, &grid).map_err(CliError::from))
        .collect::<Result<_>>()?;
    let rows: Vec<EquivalenceRow> = blocks.into_iter().flatten().collect();

    let mut doc = CsvDocument::new("sumrule-scan");
    doc.comment(&config.echo());
    let cutoffs: Vec<String> = grid.cutoffs().iter().map(|&c| fmt_f64(c)).collect();
    doc.comment(&format!(
        "# grid: panels={} nodes_per_panel={} cutoffs={} cauchy_tol={}",
        grid.panels,
        opuc_core::quadrature::NODES_PER_PANEL,
        cutoffs.join(","),
        fmt_f64(grid.cauchy_tol)
    ));
    for r in &rows {
        doc.comment(&format!(
            "# refinement: beta={} N={} status={:?} values={} error_estimate={}",
            fmt_f64(r.beta),
            r.n,
            r.z.status,
            r.z.refinements.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(","),
            fmt_f64(r.z.error_estimate)
        ));
    }
    report_records(&mut doc, &rows)?;
    doc.write(out)?;

    let mut summary = vec![format!("wrote {} rows to {}", rows.len(), out.display())];
    let mut inconclusive = false;
    for block in rows.chunk_by(|a, b| a.beta == b.beta) {
        let z: Vec<String> = block.iter().map(|r| format!("{:.4}", r.z.value)).collect();
        let class = block[0].classification;
        inconclusive |= class == TrendClass::Inconclusive;
        summary.push(format!("beta={} Z=[{}] {class}", block[0].beta, z.join(", ")));
    }
    Ok(Outcome {
        code: if inconclusive { exit::INCONCLUSIVE } else { exit::PASS },
        summary,
    })
}

/// Log-spaced angles from `10·θ_min` down to `θ_min`.
pub fn fit_grid(theta_min: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|j| theta_min * 10f64.powf(1.0 - j as f64 / (points - 1) as f64))
        .collect()
}

/// `theta,log_w,used` plus the fitted exponent in the metadata.
pub fn run_exponent_fit(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let out = out_path(config)?;
    let seq = config.single_sequence()?;
    let grid = fit_grid(config.grid.theta_min, config.grid.points);
    let fit = exponent_fit(&seq, &grid)?;

    // |log w(θ)| ≤ C·θ^{-2} with C taken from the largest angle, times ten
    let (theta_max, log_w_max) = fit.samples[0];
    let c = 10.0 * log_w_max.abs() * theta_max * theta_max;
    let bound_ratio = fit
        .samples
        .iter()
        .map(|&(t, lw)| lw.abs() / (c / (t * t)))
        .fold(0.0, f64::max);

    let mut doc = CsvDocument::new("exponent-fit");
    doc.comment(&config.echo());
    doc.comment(&format!(
        "# fit: slope={} intercept={} residual={} excluded={}",
        fmt_f64(fit.slope),
        fmt_f64(fit.intercept),
        fmt_f64(fit.residual),
        fit.excluded.len()
    ));
    doc.comment(&format!("# bound: C={} max_ratio={}", fmt_f64(c), fmt_f64(bound_ratio)));
    let header = vec!["theta".to_string(), "log_w".to_string(), "used".to_string()];
    let body = fit.samples.iter().map(|&(t, lw)| {
        let used = !fit.excluded.contains(&t);
        vec![fmt_f64(t), fmt_f64(lw), u8::from(used).to_string()]
    });
    doc.records(std::iter::once(header).chain(body))?;
    doc.write(out)?;

    Ok(Outcome {
        code: exit::PASS,
        summary: vec![
            format!("wrote {} rows to {}", fit.samples.len(), out.display()),
            format!(
                "slope {:.4} (residual {:.2e}); |log w| <= C/theta^2 with C = {:.4e}, max ratio {:.3}",
                fit.slope, fit.residual, c, bound_ratio
            ),
        ],
    })
}

/// Runs every property suite. On any violation the failing inputs go to the
/// replay file (`--out`, or [`DEFAULT_REPLAY_PATH`]) and the exit code is
/// [`exit::VIOLATION`].
pub fn run_verify(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let reports = run_all(config.seed, config.trials);
    finish_verify(config, &reports)
}

fn finish_verify(config: &ExperimentConfig, reports: &[SuiteReport]) -> Result<Outcome> {
    let mut summary: Vec<String> = reports.iter().map(SuiteReport::line).collect();
    if reports.iter().all(SuiteReport::passed) {
        summary.push("all suites passed".into());
        return Ok(Outcome {
            code: exit::PASS,
            summary,
        });
    }
    let path = config.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_REPLAY_PATH));
    let records: Vec<_> = reports
        .iter()
        .flat_map(|r| r.failures.iter().flat_map(|t| t.to_records()))
        .collect();
    write_replay(&path, &records)?;
    summary.push(format!("violations found; replay file: {}", path.display()));
    Ok(Outcome {
        code: exit::VIOLATION,
        summary,
    })
}
