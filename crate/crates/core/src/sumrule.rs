//! The higher-order Szegő integral and the experiments built on it.
//!
//! `Z_m(μ) = ∫ (1 − cos θ)^m · log w(θ) dθ/2π` is evaluated by graded
//! Gauss–Kronrod quadrature (see [`crate::quadrature`]) with a sequence of
//! cutoffs around the critical point `θ = 0`. Densities of Bernstein–Szegő
//! measures are sampled through the Prüfer recurrence, which stays in the log
//! domain for any truncation length.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI, TAU};
use core::fmt;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::pruefer;
use crate::quadrature::{integrate_panels, symmetric, GridSpec};
use crate::verblunsky::VerblunskySequence;

/// Fourier coefficients of `(1 − cos θ)^m = Σ_{|k|≤m} b_k e^{−ikθ}`.
///
/// The expansion is even, so only `b_0 … b_m` are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolyCoeffs {
    m: u32,
    b: Vec<f64>,
}

impl TrigPolyCoeffs {
    /// The order `m`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `b_k` for any integer `k`; zero when `|k| > m`.
    pub fn get(&self, k: i64) -> f64 {
        usize::try_from(k.unsigned_abs())
            .ok()
            .and_then(|k| self.b.get(k).copied())
            .unwrap_or(0.0)
    }

    /// `b_0 = ∫ (1 − cos θ)^m dθ/2π`.
    pub fn b0(&self) -> f64 {
        self.b[0]
    }

    /// `b_0 … b_m`.
    pub fn nonnegative(&self) -> &[f64] {
        &self.b
    }

    /// `Σ_k b_k e^{−ikθ}`.
    pub fn evaluate(&self, theta: f64) -> f64 {
        self.b[0]
            + 2.0
                * self.b[1..]
                    .iter()
                    .enumerate()
                    .map(|(j, &bk)| bk * ((j + 1) as f64 * theta).cos())
                    .sum::<f64>()
    }
}

/// `b_k = (−1)^k·C(2m, m+k)/2^m`.
///
/// Exact (one rounding) for `m ≤ 60`; larger orders go through logarithms and
/// overflow to infinity once `b_0` exceeds the `f64` range (about `m > 1030`).
pub fn weight_poly_coeffs(m: u32) -> TrigPolyCoeffs {
    let mut b = Vec::with_capacity(m as usize + 1);
    if m <= 60 {
        // walk the row C(2m, m+k) downward from the centre in exact integers
        let scale = 2f64.powi(-(m as i32));
        let mut binom: u128 = (1..=u128::from(m)).fold(1, |acc, j| acc * (u128::from(m) + j) / j);
        for k in 0..=u128::from(m) {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            b.push(sign * binom as f64 * scale);
            binom = binom * (u128::from(m) - k) / (u128::from(m) + k + 1);
        }
    } else {
        let ln_fact = |n: u32| (2..=n).map(|j| f64::from(j).ln()).sum::<f64>();
        let total = ln_fact(2 * m);
        for k in 0..=m {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let ln_binom = total - ln_fact(m + k) - ln_fact(m - k);
            b.push(sign * (ln_binom - f64::from(m) * LN_2).exp());
        }
    }
    TrigPolyCoeffs { m, b }
}

/// Outcome of the Cauchy test across cutoff refinements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinementStatus {
    /// The last two refinements agree within the grid's `cauchy_tol`.
    Converged,
    /// Refinements decrease with non-shrinking steps.
    Divergent,
    /// Neither; typically non-monotone refinement.
    Inconclusive,
}

/// A quadrature estimate of `Z_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZEstimate {
    /// Order `m`.
    pub m: u32,
    /// Estimate at the finest cutoff; `−∞` is never produced, divergence is
    /// signalled through `status`.
    pub value: f64,
    /// `∫ max(integrand, 0)`, bounded by `2^m`.
    pub positive_part: f64,
    /// `∫ max(−integrand, 0)`.
    pub negative_part: f64,
    /// Cauchy-test outcome over `refinements`.
    pub status: RefinementStatus,
    /// Estimates for each cutoff, coarsest first.
    pub refinements: Vec<f64>,
    /// The cutoffs matching `refinements`.
    pub cutoffs: Vec<f64>,
    /// Summed Gauss–Kronrod error estimate at the finest cutoff.
    pub error_estimate: f64,
    /// Sampler calls.
    pub evaluations: usize,
    /// The grid used.
    pub grid: GridSpec,
}

impl ZEstimate {
    /// Whether the value converged under refinement.
    pub fn is_converged(&self) -> bool {
        self.status == RefinementStatus::Converged
    }
}

fn refinement_status(values: &[f64], cauchy_tol: f64) -> RefinementStatus {
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let Some(&last) = diffs.last() else {
        return RefinementStatus::Inconclusive;
    };
    let scale = values[values.len() - 1].abs().max(1.0);
    if last.abs() <= cauchy_tol * scale {
        RefinementStatus::Converged
    } else if diffs.iter().all(|&d| d < 0.0) && diffs.windows(2).all(|w| w[1].abs() >= w[0].abs()) {
        RefinementStatus::Divergent
    } else {
        RefinementStatus::Inconclusive
    }
}

/// `(2 sin²(θ/2))^m`, accurate near `θ = 0`.
fn weight(theta: f64, m: u32) -> f64 {
    let s = (0.5 * theta).sin();
    (2.0 * s * s).powi(m as i32)
}

/// [`z_integral`] for several log densities sampled together.
///
/// `sampler(θ, out)` writes `log w_c(θ)` for each channel into `out`; `θ`
/// ranges over `(−π, π] \ {0}`. The adaptive tolerance of `grid` applies to
/// the worst channel.
pub fn z_integral_many<F>(mut sampler: F, channels: usize, m: u32, grid: &GridSpec) -> Result<Vec<ZEstimate>>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    grid.validate()?;
    if channels == 0 {
        return Err(Error::invalid("channels", "must be >= 1"));
    }
    let mut samples = vec![0.0; channels];
    let mut integrand = |theta: f64, out: &mut [f64]| -> Result<()> {
        sampler(theta, &mut samples)?;
        let w = weight(theta, m) / TAU;
        for (c, &log_w) in samples.iter().enumerate() {
            if !log_w.is_finite() {
                return Err(Error::NonFiniteSample { theta });
            }
            let f = w * log_w;
            out[3 * c] = f;
            out[3 * c + 1] = f.max(0.0);
            out[3 * c + 2] = (-f).max(0.0);
        }
        Ok(())
    };

    let width = 3 * channels;
    let outer = integrate_panels(
        &mut integrand,
        width,
        &symmetric(&grid.outer_panels()),
        grid.tol,
        grid.max_subdivisions,
    )?;
    let cutoffs = grid.cutoffs();
    let mut evaluations = outer.evaluations;
    let mut levels = Vec::with_capacity(cutoffs.len());
    for &cutoff in &cutoffs {
        let inner = integrate_panels(
            &mut integrand,
            width,
            &symmetric(&grid.inner_panels(cutoff)),
            grid.tol,
            grid.max_subdivisions,
        )?;
        evaluations += inner.evaluations;
        levels.push(inner);
    }
    let finest = levels.last().expect("at least two refinement levels");

    Ok((0..channels)
        .map(|c| {
            let refinements: Vec<f64> = levels.iter().map(|l| outer.values[3 * c] + l.values[3 * c]).collect();
            ZEstimate {
                m,
                value: refinements[refinements.len() - 1],
                positive_part: outer.values[3 * c + 1] + finest.values[3 * c + 1],
                negative_part: outer.values[3 * c + 2] + finest.values[3 * c + 2],
                status: refinement_status(&refinements, grid.cauchy_tol),
                refinements,
                cutoffs: cutoffs.clone(),
                error_estimate: outer.error + finest.error,
                evaluations,
                grid: *grid,
            }
        })
        .collect())
}

/// `∫ (1 − cos θ)^m · log w(θ) dθ/2π` for a sampler of `log w` on
/// `(−π, π] \ {0}`.
pub fn z_integral<F>(mut sampler: F, m: u32, grid: &GridSpec) -> Result<ZEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut estimates = z_integral_many(
        |theta, out: &mut [f64]| {
            out[0] = sampler(theta)?;
            Ok(())
        },
        1,
        m,
        grid,
    )?;
    Ok(estimates.remove(0))
}

/// A sampler of the Bernstein–Szegő log density of `seq`, for [`z_integral`].
pub fn bernstein_szego_log_density(seq: &VerblunskySequence) -> impl FnMut(f64) -> Result<f64> + '_ {
    move |theta| {
        let eta = if theta < 0.0 { theta + TAU } else { theta };
        let log_w = -2.0 * pruefer::log_r_partial(seq, eta, seq.len());
        if log_w.is_finite() {
            Ok(log_w)
        } else {
            Err(Error::NonFiniteSample { theta })
        }
    }
}

/// `Σ_n log(1 − |α_n|²)`, the value of `Z_0` for the Bernstein–Szegő measure of `seq`.
pub fn szego_identity_m0(seq: &VerblunskySequence) -> f64 {
    seq.coeffs().iter().map(|a| (-a.norm_sqr()).ln_1p()).sum()
}

/// `f(α) = b_0·log ρ + Σ_{k=1}^m d_k |α|^{2k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumRuleApproximant {
    /// Order `m`.
    pub m: u32,
    /// `d_1 … d_m`; missing trailing entries are zero.
    pub d: Vec<f64>,
    /// `b_0` of [`weight_poly_coeffs`].
    pub b0: f64,
}

impl SumRuleApproximant {
    /// All `d_k = 0`.
    pub fn new(m: u32) -> Self {
        Self {
            m,
            d: Vec::new(),
            b0: weight_poly_coeffs(m).b0(),
        }
    }

    /// Caller-supplied corrections `d_1 … d_m`.
    pub fn with_corrections(m: u32, d: Vec<f64>) -> Result<Self> {
        if d.len() > m as usize {
            return Err(Error::invalid("d", alloc::format!("at most m = {m} corrections, got {}", d.len())));
        }
        if d.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("d", "entries must be finite"));
        }
        Ok(Self { d, ..Self::new(m) })
    }

    fn d(&self, k: usize) -> f64 {
        k.checked_sub(1).and_then(|j| self.d.get(j)).copied().unwrap_or(0.0)
    }

    /// `f(α)`.
    pub fn eval(&self, alpha: Complex64) -> Result<f64> {
        let r2 = alpha.norm_sqr();
        if !(r2 < 1.0) {
            return Err(Error::OutsideDisk {
                index: 0,
                modulus: alpha.norm(),
            });
        }
        let log_rho = 0.5 * (-r2).ln_1p();
        let mut power = 1.0;
        let mut corrections = 0.0;
        for d in &self.d {
            power *= r2;
            corrections += d * power;
        }
        Ok(self.b0 * log_rho + corrections)
    }

    /// Power-series coefficient `c_k` of `f` in `|α|²`, for `k ≥ 1`.
    pub fn coefficient(&self, k: usize) -> f64 {
        assert!(k >= 1, "power-series coefficients start at k = 1");
        self.d(k) - self.b0 / (2.0 * k as f64)
    }

    /// The first `(l, c_l)` with `c_l ≠ 0`; `l ≤ m + 1`.
    pub fn leading_term(&self) -> (usize, f64) {
        (1..=self.m as usize + 1)
            .map(|k| (k, self.coefficient(k)))
            .find(|&(_, c)| c != 0.0)
            .expect("c_{m+1} = -b0/(2(m+1)) is nonzero")
    }
}

/// [`SumRuleApproximant::eval`] as a free function.
pub fn f_series_eval(approx: &SumRuleApproximant, alpha: Complex64) -> Result<f64> {
    approx.eval(alpha)
}

/// Least-squares fit of `log|log w(θ)|` against `log(1/θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    /// Growth exponent estimate.
    pub slope: f64,
    /// Fit intercept.
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    /// `(θ, log w(θ))` at every grid point, excluded ones included.
    pub samples: Vec<(f64, f64)>,
    /// Grid points left out because `|log w| < 1e−12`.
    pub excluded: Vec<f64>,
}

/// Points with `|log w|` below this are left out of [`exponent_fit`].
pub const FIT_EXCLUSION: f64 = 1e-12;

/// Fits the growth of `|log w|` toward `θ = 0` for the Bernstein–Szegő measure of `seq`.
///
/// `theta_grid` must be strictly decreasing inside `(0, π/4]` and span at
/// least a factor of ten.
pub fn exponent_fit(seq: &VerblunskySequence, theta_grid: &[f64]) -> Result<ExponentFit> {
    validate_fit_grid(theta_grid)?;
    let samples: Vec<(f64, f64)> = theta_grid
        .iter()
        .map(|&theta| (theta, -2.0 * pruefer::log_r_partial(seq, theta, seq.len())))
        .collect();
    fit_growth_exponent(&samples)
}

fn validate_fit_grid(grid: &[f64]) -> Result<()> {
    let (Some(&first), Some(&last)) = (grid.first(), grid.last()) else {
        return Err(Error::invalid("theta_grid", "must not be empty"));
    };
    if grid.iter().any(|&t| !(t > 0.0 && t <= PI / 4.0)) {
        return Err(Error::invalid("theta_grid", "angles must lie in (0, pi/4]"));
    }
    if grid.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("theta_grid", "must be strictly decreasing"));
    }
    if first < 10.0 * last * (1.0 - 1e-12) {
        return Err(Error::invalid("theta_grid", "must span at least one decade"));
    }
    Ok(())
}

/// The least-squares fit behind [`exponent_fit`] on precomputed `(θ, log w)` samples.
pub fn fit_growth_exponent(samples: &[(f64, f64)]) -> Result<ExponentFit> {
    let mut excluded = Vec::new();
    let mut points = Vec::with_capacity(samples.len());
    for &(theta, log_w) in samples {
        if !log_w.is_finite() {
            return Err(Error::NonFiniteSample { theta });
        }
        if log_w.abs() < FIT_EXCLUSION {
            excluded.push(theta);
        } else {
            points.push(((1.0 / theta).ln(), log_w.abs().ln()));
        }
    }
    if points.len() < 2 {
        return Err(Error::FitRejected { usable: points.len() });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if !(sxx > 0.0) {
        return Err(Error::FitRejected { usable: points.len() });
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = (points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ExponentFit {
        slope,
        intercept,
        residual,
        samples: samples.to_vec(),
        excluded,
    })
}

/// Trend label for `Z_m(N)` along increasing `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendClass {
    /// `Z_m` settles.
    Bounded,
    /// `Z_m` decreases monotonically by at least one unit.
    Diverging,
    /// Neither rule applies, or some estimate failed its Cauchy test.
    Inconclusive,
}

impl fmt::Display for TrendClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrendClass::Bounded => "BOUNDED",
            TrendClass::Diverging => "DIVERGING",
            TrendClass::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Drop in `Z` from first to last `N` that marks divergence.
pub const DIVERGENCE_DROP: f64 = 1.0;
/// Total-variation ceiling over the upper half of the `N` list for boundedness.
pub const BOUNDED_VARIATION: f64 = 0.1;

/// Classifies `Z_m(N_1), …, Z_m(N_L)` for increasing `N`.
///
/// DIVERGING when every step decreases and the total drop is at least
/// [`DIVERGENCE_DROP`]; BOUNDED when the total variation over the upper half
/// of the list (at least its last two entries) is at most
/// [`BOUNDED_VARIATION`]; INCONCLUSIVE otherwise or with fewer than two values.
pub fn classify_trend(z: &[f64]) -> TrendClass {
    let len = z.len();
    if len < 2 || z.iter().any(|v| !v.is_finite()) {
        return TrendClass::Inconclusive;
    }
    let decreasing = z.windows(2).all(|w| w[1] < w[0]);
    if decreasing && z[len - 1] <= z[0] - DIVERGENCE_DROP {
        return TrendClass::Diverging;
    }
    let start = (len / 2).min(len - 2);
    let variation: f64 = z[start..].windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    if variation <= BOUNDED_VARIATION {
        TrendClass::Bounded
    } else {
        TrendClass::Inconclusive
    }
}

fn validate_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() {
        return Err(Error::invalid("N", "list must not be empty"));
    }
    if n_list[0] == 0 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("N", "must be positive and strictly increasing"));
    }
    Ok(())
}

/// `Z_m` of the Bernstein–Szegő truncations of `seq` at each `N` in `n_list`,
/// sharing one Prüfer pass per quadrature node.
pub fn z_truncations(seq: &VerblunskySequence, m: u32, n_list: &[usize], grid: &GridSpec) -> Result<Vec<ZEstimate>> {
    validate_n_list(n_list)?;
    let mut log_r = vec![0.0; n_list.len()];
    z_integral_many(
        |theta, out: &mut [f64]| {
            let eta = if theta < 0.0 { theta + TAU } else { theta };
            pruefer::log_r_checkpoints(seq, eta, n_list, &mut log_r);
            for (o, &l) in out.iter_mut().zip(&log_r) {
                *o = -2.0 * l;
            }
            Ok(())
        },
        n_list.len(),
        m,
        grid,
    )
}

/// One row of the equivalence report.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceRow {
    /// Order `m`.
    pub m: u32,
    /// Decay exponent of the power sequence.
    pub beta: f64,
    /// Truncation length.
    pub n: usize,
    /// `Z_m` of the truncation.
    pub z: ZEstimate,
    /// `‖α‖_{2m+2}` over the first `N` coefficients.
    pub lp_partial_norm: f64,
    /// Trend label shared by all rows of this `beta`.
    pub classification: TrendClass,
}

/// Rows for a single `beta`: `Z_m` of `power_sequence(beta, c, N)` for each
/// `N` in `n_list`, with the trend classification.
pub fn equivalence_rows(m: u32, beta: f64, c: f64, n_list: &[usize], grid: &GridSpec) -> Result<Vec<EquivalenceRow>> {
    validate_n_list(n_list)?;
    let seq = VerblunskySequence::power_sequence(beta, c, n_list[n_list.len() - 1])?;
    let estimates = z_truncations(&seq, m, n_list, grid)?;
    let values: Vec<f64> = estimates.iter().map(|z| z.value).collect();
    let classification = if estimates.iter().all(ZEstimate::is_converged) {
        classify_trend(&values)
    } else {
        TrendClass::Inconclusive
    };
    let p = f64::from(2 * m + 2);
    estimates
        .into_iter()
        .zip(n_list)
        .map(|(z, &n)| {
            Ok(EquivalenceRow {
                m,
                beta,
                n,
                z,
                lp_partial_norm: crate::verblunsky::lp_norm(&seq.coeffs()[..n], p)?,
                classification,
            })
        })
        .collect()
}

/// The full report over `beta_list`, one block of rows per `beta`.
pub fn equivalence_experiment(
    m: u32,
    beta_list: &[f64],
    c: f64,
    n_list: &[usize],
    grid: &GridSpec,
) -> Result<Vec<EquivalenceRow>> {
    if beta_list.is_empty() {
        return Err(Error::invalid("beta", "list must not be empty"));
    }
    let mut rows = Vec::new();
    for &beta in beta_list {
        rows.extend(equivalence_rows(m, beta, c, n_list, grid)?);
    }
    Ok(rows)
}

/// The exponent `1/(2m+2)` separating bounded from diverging power sequences.
pub fn critical_beta(m: u32) -> f64 {
    1.0 / f64::from(2 * m + 2)
}
