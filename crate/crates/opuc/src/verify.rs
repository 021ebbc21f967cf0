//! Seeded randomized property suites.
//!
//! Each trial draws its inputs from its own ChaCha8 stream derived from
//! `(seed, suite, trial)`, so suites can run in parallel and still reproduce
//! bit for bit. Failing trials are kept as [`Trial`] values, which serialize
//! to replay records and can be re-checked with [`replay`].

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use opuc_core::inequalities::{check_power_mean, check_product_comparison, check_telescope_product, TupleSpec};
use opuc_core::pruefer::{abel_transform, phase_track, AbelInput, PrueferState};
use opuc_core::quadrature::{integrate_panels, GridSpec};
use opuc_core::sumrule::{bernstein_szego_log_density, szego_identity_m0, z_integral};
use opuc_core::szego::PolynomialPair;
use opuc_core::{Complex64, Error, VerblunskySequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::io::ReplayRecord;

/// Modulus of the near-boundary adversarial samples.
pub const BOUNDARY_RADIUS: f64 = 1.0 - 1e-6;
/// Truncation length for the product-comparison suite.
pub const PRODUCT_LENGTH: usize = 10_000;
/// Agreement required between the telescoped and direct sums, relative to term size.
pub const ABEL_TOLERANCE: f64 = 1e-8;
/// Gram-matrix tolerance.
pub const GRAM_TOLERANCE: f64 = 1e-8;
/// Relative tolerance between Prüfer moduli and polynomial values.
pub const PRUEFER_TOLERANCE: f64 = 1e-9;
/// Tolerance of the zeroth-order sum rule.
pub const SUM_RULE_TOLERANCE: f64 = 1e-6;
/// Failing trials retained per suite.
const KEPT_FAILURES: usize = 20;

/// The property suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    /// `|Πz − Πz'| ≤ k·max|z − z'|`.
    TelescopeProduct,
    /// `|Σz^k/k − Πz| ≤ (k−1)² max|z_i − z_j|²`.
    PowerMean,
    /// Product-versus-diagonal comparisons on long truncations.
    ProductComparison,
    /// Summation by parts against direct summation, and resonance rejection.
    SummationByParts,
    /// Gram matrix of `φ_0 … φ_N` under the Bernstein–Szegő measure.
    Orthonormality,
    /// Prüfer moduli against the Szegő recursion on values.
    PrueferConsistency,
    /// `Z_0` against `Σ log(1 − |α_n|²)`.
    SumRuleM0,
    /// Positive part of the `Z_m` integrand against `2^m`.
    PositivePart,
}

impl Suite {
    /// Every suite, in run order.
    pub const ALL: [Suite; 8] = [
        Suite::TelescopeProduct,
        Suite::PowerMean,
        Suite::ProductComparison,
        Suite::SummationByParts,
        Suite::Orthonormality,
        Suite::PrueferConsistency,
        Suite::SumRuleM0,
        Suite::PositivePart,
    ];

    /// Name used in summaries and replay files.
    pub fn name(self) -> &'static str {
        match self {
            Suite::TelescopeProduct => "telescope_product",
            Suite::PowerMean => "power_mean",
            Suite::ProductComparison => "product_comparison",
            Suite::SummationByParts => "summation_by_parts",
            Suite::Orthonormality => "orthonormality",
            Suite::PrueferConsistency => "pruefer_consistency",
            Suite::SumRuleM0 => "sum_rule_m0",
            Suite::PositivePart => "positive_part",
        }
    }

    /// Inverse of [`Suite::name`].
    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// What the reported statistic measures.
    pub fn metric(self) -> &'static str {
        match self {
            Suite::TelescopeProduct | Suite::PowerMean | Suite::ProductComparison => "max lhs-rhs",
            Suite::SummationByParts => "max rel. mismatch",
            Suite::Orthonormality => "max |G-I|",
            Suite::PrueferConsistency => "max rel. error",
            Suite::SumRuleM0 => "max |Z-sum|",
            Suite::PositivePart => "max pos-2^m",
        }
    }

    /// Number of trials for a requested budget of `trials`.
    pub fn trial_count(self, trials: usize) -> usize {
        match self {
            Suite::TelescopeProduct | Suite::PowerMean => trials,
            Suite::ProductComparison => (trials / 100).max(1),
            // every eleventh trial is resonant
            Suite::SummationByParts => {
                let base = (trials / 100).max(1);
                base + base.div_ceil(10)
            }
            Suite::Orthonormality | Suite::SumRuleM0 => trials.min(20),
            Suite::PrueferConsistency => trials.min(10),
            Suite::PositivePart => trials.min(40),
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The generator for one trial.
pub fn trial_rng(seed: u64, suite: Suite, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(suite.tag() ^ splitmix(trial as u64))))
}

fn disk_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

fn boundary_point(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(BOUNDARY_RADIUS, TAU * rng.gen::<f64>())
}

/// `k` points: uniform, all near the boundary, or mixed.
fn adversarial_points(rng: &mut impl Rng, k: usize) -> Vec<Complex64> {
    let mode = rng.gen_range(0..4);
    (0..k)
        .map(|_| match mode {
            0 | 1 => disk_point(rng, 1.0),
            2 => boundary_point(rng),
            _ if rng.gen::<bool>() => boundary_point(rng),
            _ => disk_point(rng, 1.0),
        })
        .collect()
}

fn random_sequence(rng: &mut impl Rng, len: usize, radius: f64) -> Vec<Complex64> {
    (0..len).map(|_| disk_point(rng, radius)).collect()
}

/// A decaying sequence of length `n` from one of four families.
fn decaying_sequence(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    match rng.gen_range(0..4) {
        0 => VerblunskySequence::test_sequence(rng.gen_range(1..=3), n)
            .expect("valid parameters")
            .coeffs()
            .to_vec(),
        1 => VerblunskySequence::power_sequence(rng.gen_range(0.1..1.5), rng.gen_range(0.05..0.95), n)
            .expect("valid parameters")
            .coeffs()
            .to_vec(),
        2 => {
            let (beta, c, omega) = (rng.gen_range(0.1..1.5), rng.gen_range(0.05..0.95), rng.gen_range(0.0..TAU));
            (0..n)
                .map(|j| Complex64::from_polar(c * ((j + 1) as f64).powf(-beta), omega * j as f64))
                .collect()
        }
        _ => {
            let rate = rng.gen_range(0.5..3.0);
            (0..n)
                .map(|j| disk_point(rng, 0.95) * (1.0 - j as f64 / n as f64).powf(rate))
                .collect()
        }
    }
}

/// Inputs of one trial.
#[derive(Debug, Clone, PartialEq)]
pub enum Trial {
    /// Two lists of disk points.
    TelescopeProduct {
        /// Trial number.
        trial: usize,
        /// `z_1 … z_k`.
        z: Vec<Complex64>,
        /// `z'_1 … z'_k`.
        z_prime: Vec<Complex64>,
    },
    /// One list of disk points.
    PowerMean {
        /// Trial number.
        trial: usize,
        /// `z_1 … z_k`.
        z: Vec<Complex64>,
    },
    /// A sequence and an index tuple.
    ProductComparison {
        /// Trial number.
        trial: usize,
        /// The tuple.
        spec: TupleSpec,
        /// The coefficients.
        alpha: Vec<Complex64>,
    },
    /// Summation-by-parts inputs.
    SummationByParts {
        /// Trial number.
        trial: usize,
        /// The transform's inputs.
        input: AbelInput,
        /// `θ_0 … θ_L`, if not identically zero.
        phases: Option<Vec<f64>>,
        /// Whether the input is built to be resonant and must be rejected.
        resonant: bool,
    },
    /// A measure given by its Verblunsky coefficients.
    Measure {
        /// Which cross-module suite.
        suite: Suite,
        /// Trial number.
        trial: usize,
        /// Order `m` (positive-part suite).
        m: u32,
        /// The coefficients.
        alpha: Vec<Complex64>,
    },
}

/// Verdict of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// The property held.
    pub ok: bool,
    /// The suite's statistic for this trial.
    pub stat: f64,
}

impl Trial {
    /// Draws trial `trial` of `suite`.
    pub fn generate(seed: u64, suite: Suite, trial: usize) -> Trial {
        let rng = &mut trial_rng(seed, suite, trial);
        match suite {
            Suite::TelescopeProduct => {
                let k = rng.gen_range(1..=6);
                let z = adversarial_points(rng, k);
                let z_prime = if rng.gen_range(0..4) == 0 {
                    // nearby points stress the regime where both sides are small
                    z.iter()
                        .map(|&v| v * Complex64::from_polar(1.0, 1e-3 * (rng.gen::<f64>() - 0.5)))
                        .collect()
                } else {
                    adversarial_points(rng, k)
                };
                Trial::TelescopeProduct { trial, z, z_prime }
            }
            Suite::PowerMean => {
                let k = rng.gen_range(1..=6);
                Trial::PowerMean {
                    trial,
                    z: adversarial_points(rng, k),
                }
            }
            Suite::ProductComparison => {
                let l = rng.gen_range(1..=4);
                let k = rng.gen_range(1..=l);
                let t = (0..2 * k).map(|_| rng.gen_range(0..=l)).collect();
                Trial::ProductComparison {
                    trial,
                    spec: TupleSpec::new(l, k, t).expect("valid by construction"),
                    alpha: decaying_sequence(rng, PRODUCT_LENGTH),
                }
            }
            Suite::SummationByParts => abel_trial(rng, trial),
            Suite::Orthonormality => {
                let len = rng.gen_range(1..=8);
                Trial::measure(suite, trial, 0, random_sequence(rng, len, 0.9))
            }
            Suite::PrueferConsistency => Trial::measure(suite, trial, 0, random_sequence(rng, 500, 0.9)),
            Suite::SumRuleM0 => {
                let len = rng.gen_range(1..=50);
                Trial::measure(suite, trial, 0, random_sequence(rng, len, 0.9))
            }
            Suite::PositivePart => {
                let len = rng.gen_range(1..=50);
                Trial::measure(suite, trial, (trial % 4) as u32, random_sequence(rng, len, 0.95))
            }
        }
    }

    fn measure(suite: Suite, trial: usize, m: u32, alpha: Vec<Complex64>) -> Trial {
        Trial::Measure { suite, trial, m, alpha }
    }

    /// The suite this trial belongs to.
    pub fn suite(&self) -> Suite {
        match self {
            Trial::TelescopeProduct { .. } => Suite::TelescopeProduct,
            Trial::PowerMean { .. } => Suite::PowerMean,
            Trial::ProductComparison { .. } => Suite::ProductComparison,
            Trial::SummationByParts { .. } => Suite::SummationByParts,
            Trial::Measure { suite, .. } => *suite,
        }
    }

    /// The trial number.
    pub fn number(&self) -> usize {
        match self {
            Trial::TelescopeProduct { trial, .. }
            | Trial::PowerMean { trial, .. }
            | Trial::ProductComparison { trial, .. }
            | Trial::SummationByParts { trial, .. }
            | Trial::Measure { trial, .. } => *trial,
        }
    }

    /// Runs the check.
    pub fn evaluate(&self) -> Result<TrialOutcome> {
        Ok(match self {
            Trial::TelescopeProduct { z, z_prime, .. } => {
                let c = check_telescope_product(z, z_prime)?;
                TrialOutcome { ok: c.ok, stat: c.excess() }
            }
            Trial::PowerMean { z, .. } => {
                let c = check_power_mean(z)?;
                TrialOutcome { ok: c.ok, stat: c.excess() }
            }
            Trial::ProductComparison { spec, alpha, .. } => {
                let seq = VerblunskySequence::new(alpha.clone())?;
                let r = check_product_comparison(&seq, spec, alpha.len())?;
                let stat = [
                    r.chain_triangle.worst.excess(),
                    r.chain_cauchy_schwarz.worst.excess(),
                    r.product_gap.worst.excess(),
                    r.modulus_odd.worst.excess(),
                    r.modulus_even.worst.excess(),
                    r.aggregate.excess(),
                ]
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
                TrialOutcome { ok: r.ok(), stat }
            }
            Trial::SummationByParts {
                input,
                phases,
                resonant,
                ..
            } => evaluate_abel(input, phases.as_deref(), *resonant)?,
            Trial::Measure { suite, m, alpha, .. } => {
                let seq = VerblunskySequence::new(alpha.clone())?;
                match suite {
                    Suite::Orthonormality => {
                        let err = gram_error(&seq)?;
                        TrialOutcome {
                            ok: err <= GRAM_TOLERANCE,
                            stat: err,
                        }
                    }
                    Suite::PrueferConsistency => {
                        let err = pruefer_error(&seq, 100)?;
                        TrialOutcome {
                            ok: err <= PRUEFER_TOLERANCE,
                            stat: err,
                        }
                    }
                    Suite::SumRuleM0 => {
                        let grid = GridSpec::adaptive(GridSpec::panels_for_points(1 << 14), 1e-9);
                        let z = z_integral(bernstein_szego_log_density(&seq), 0, &grid)?;
                        let err = (z.value - szego_identity_m0(&seq)).abs();
                        TrialOutcome {
                            ok: err <= SUM_RULE_TOLERANCE,
                            stat: err,
                        }
                    }
                    Suite::PositivePart => {
                        let grid = GridSpec::adaptive(64, 1e-9);
                        let z = z_integral(bernstein_szego_log_density(&seq), *m, &grid)?;
                        let excess = z.positive_part - 2f64.powi(*m as i32);
                        TrialOutcome {
                            ok: excess <= 0.0,
                            stat: excess,
                        }
                    }
                    other => unreachable!("{other:?} trials are not measures"),
                }
            }
        })
    }

    /// Serializes the inputs as replay records.
    pub fn to_records(&self) -> Vec<ReplayRecord> {
        let suite = self.suite().name();
        let trial = self.number();
        let mut out = Vec::new();
        let mut push = |key: &str, index: usize, re: f64, im: f64| {
            out.push(ReplayRecord {
                suite: suite.to_string(),
                trial,
                key: key.to_string(),
                index,
                re,
                im,
            })
        };
        let list = |push: &mut dyn FnMut(&str, usize, f64, f64), key: &str, v: &[Complex64]| {
            for (i, z) in v.iter().enumerate() {
                push(key, i, z.re, z.im);
            }
        };
        match self {
            Trial::TelescopeProduct { z, z_prime, .. } => {
                list(&mut push, "z", z);
                list(&mut push, "z_prime", z_prime);
            }
            Trial::PowerMean { z, .. } => list(&mut push, "z", z),
            Trial::ProductComparison { spec, alpha, .. } => {
                push("l", 0, spec.l() as f64, 0.0);
                for (i, &t) in spec.t().iter().enumerate() {
                    push("t", i, t as f64, 0.0);
                }
                list(&mut push, "alpha", alpha);
            }
            Trial::SummationByParts {
                input,
                phases,
                resonant,
                ..
            } => {
                push("k", 0, input.k as f64, 0.0);
                push("phi", 0, input.phi, 0.0);
                push("eta", 0, input.eta, 0.0);
                push("f", 0, input.f_value.re, input.f_value.im);
                push("resonant", 0, f64::from(u8::from(*resonant)), 0.0);
                list(&mut push, "gamma", &input.gamma);
                for (i, &theta) in phases.iter().flatten().enumerate() {
                    push("phases", i, theta, 0.0);
                }
            }
            Trial::Measure { m, alpha, .. } => {
                push("m", 0, f64::from(*m), 0.0);
                list(&mut push, "alpha", alpha);
            }
        }
        out
    }

    /// Rebuilds a trial from its replay records (all of one suite and trial number).
    pub fn from_records(records: &[ReplayRecord]) -> Result<Trial> {
        let bad = |reason: String| CliError::Format {
            path: "<replay>".into(),
            reason,
        };
        let first = records.first().ok_or_else(|| bad("empty trial".into()))?;
        let suite = Suite::from_name(&first.suite).ok_or_else(|| bad(format!("unknown suite `{}`", first.suite)))?;
        let trial = first.trial;
        let mut fields: BTreeMap<&str, Vec<(usize, Complex64)>> = BTreeMap::new();
        for r in records {
            fields.entry(r.key.as_str()).or_default().push((r.index, Complex64::new(r.re, r.im)));
        }
        let list = |key: &str| -> Vec<Complex64> {
            let mut v = fields.get(key).cloned().unwrap_or_default();
            v.sort_by_key(|e| e.0);
            v.into_iter().map(|e| e.1).collect()
        };
        let scalar = |key: &str| -> Result<Complex64> {
            list(key).first().copied().ok_or_else(|| bad(format!("trial {trial}: missing `{key}`")))
        };
        Ok(match suite {
            Suite::TelescopeProduct => Trial::TelescopeProduct {
                trial,
                z: list("z"),
                z_prime: list("z_prime"),
            },
            Suite::PowerMean => Trial::PowerMean { trial, z: list("z") },
            Suite::ProductComparison => {
                let t: Vec<usize> = list("t").iter().map(|v| v.re as usize).collect();
                let spec = TupleSpec::new(scalar("l")?.re as usize, t.len() / 2, t)?;
                Trial::ProductComparison {
                    trial,
                    spec,
                    alpha: list("alpha"),
                }
            }
            Suite::SummationByParts => {
                let phases: Vec<f64> = list("phases").iter().map(|v| v.re).collect();
                Trial::SummationByParts {
                    trial,
                    input: AbelInput {
                        k: scalar("k")?.re as i64,
                        phi: scalar("phi")?.re,
                        gamma: list("gamma"),
                        f_value: scalar("f")?,
                        eta: scalar("eta")?.re,
                    },
                    phases: (!phases.is_empty()).then_some(phases),
                    resonant: scalar("resonant")?.re != 0.0,
                }
            }
            _ => Trial::Measure {
                suite,
                trial,
                m: scalar("m")?.re as u32,
                alpha: list("alpha"),
            },
        })
    }
}

fn abel_trial(rng: &mut impl Rng, trial: usize) -> Trial {
    let len = rng.gen_range(1..=200);
    let decay = rng.gen_range(0.0..3.0);
    let gamma: Vec<Complex64> = (0..len)
        .map(|n| disk_point(rng, 1.0) * (1.0 - n as f64 / len as f64).powf(decay))
        .collect();
    let f_value = disk_point(rng, 1.0);
    let eta = rng.gen_range(1e-3..TAU);
    let use_phases = rng.gen::<bool>();
    let (beta, c) = (rng.gen_range(0.2..1.5), rng.gen_range(0.1..0.9));
    let resonant = trial % 11 == 10;
    let mut k = rng.gen_range(-4i64..=4);
    let phi = if resonant {
        if k == 0 {
            k = 2;
        }
        (k as f64 * eta).rem_euclid(TAU)
    } else {
        let mut phi = rng.gen_range(0.0..TAU);
        let gap = (Complex64::from_polar(1.0, -(k as f64 * eta - phi)) - 1.0).norm();
        if gap < 1e-6 {
            phi = (phi + 0.5).rem_euclid(TAU);
        }
        phi
    };
    let phases = use_phases.then(|| {
        let seq = VerblunskySequence::power_sequence(beta, c, len).expect("valid parameters");
        phase_track(&seq, eta, len)
    });
    Trial::SummationByParts {
        trial,
        input: AbelInput {
            k,
            phi,
            gamma,
            f_value,
            eta,
        },
        phases,
        resonant,
    }
}

fn evaluate_abel(input: &AbelInput, phases: Option<&[f64]>, resonant: bool) -> Result<TrialOutcome> {
    let telescoped = abel_transform(input, phases);
    if resonant {
        let rejected = matches!(telescoped, Err(Error::Resonant { .. }))
            && matches!(input.direct_sum(phases), Err(Error::Resonant { .. }));
        return Ok(TrialOutcome {
            ok: rejected,
            stat: 0.0,
        });
    }
    let s = telescoped?;
    let direct = input.direct_sum(phases)?;
    let mass: f64 = input.gamma.iter().map(|g| g.norm()).sum();
    let scale = ((input.f_value.norm() + 2.0 * s.g_value.norm()) * mass).max(1.0);
    let mismatch = (s.sum - direct).norm() / scale;
    let bounded = s.sum.norm() <= s.bound * (1.0 + 1e-12) + 1e-12;
    Ok(TrialOutcome {
        ok: mismatch <= ABEL_TOLERANCE && bounded,
        stat: mismatch,
    })
}

/// `max |⟨φ_j, φ_k⟩ − δ_jk|` over `j, k ≤ N` under the Bernstein–Szegő
/// measure of `seq`, by adaptive Gauss–Kronrod quadrature.
pub fn gram_error(seq: &VerblunskySequence) -> Result<f64> {
    let mut pairs = vec![PolynomialPair::initial()];
    for &a in seq.coeffs() {
        let next = pairs.last().expect("non-empty").step(a)?;
        pairs.push(next);
    }
    let n = pairs.len();
    let mut integrand = |theta: f64, out: &mut [f64]| {
        let w = opuc_core::szego::bernstein_szego_density(seq, theta) / TAU;
        let values: Vec<Complex64> = pairs.iter().map(|p| p.evaluate(theta).0).collect();
        for a in 0..n {
            for b in 0..n {
                let v = values[a] * values[b].conj() * w;
                out[2 * (a * n + b)] = v.re;
                out[2 * (a * n + b) + 1] = v.im;
            }
        }
        Ok(())
    };
    let panels: Vec<(f64, f64)> = (0..64).map(|j| (TAU * j as f64 / 64.0, TAU * (j + 1) as f64 / 64.0)).collect();
    let sum = integrate_panels(&mut integrand, 2 * n * n, &panels, 1e-11, 200_000)?;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let target = if a == b { 1.0 } else { 0.0 };
            let v = Complex64::new(sum.values[2 * (a * n + b)], sum.values[2 * (a * n + b) + 1]);
            worst = worst.max((v - target).norm());
        }
    }
    Ok(worst)
}

/// Largest `|exp(log r_n) − |φ_n(e^{iη})|| / |φ_n(e^{iη})|` over `n ≤ N` and
/// `points` angles `η_j = 2π(j + ½)/points`, with `φ_n` from the Szegő
/// recursion on values.
pub fn pruefer_error(seq: &VerblunskySequence, points: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 0..points {
        let eta = TAU * (j as f64 + 0.5) / points as f64;
        let z = Complex64::from_polar(1.0, eta);
        let mut state = PrueferState::new(eta);
        let (mut phi, mut phi_star) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        for &a in seq.coeffs() {
            state = state.step(a)?;
            let rho = (1.0 - a.norm_sqr()).sqrt();
            (phi, phi_star) = ((z * phi - a.conj() * phi_star) / rho, (phi_star - a * z * phi) / rho);
            worst = worst.max(((state.log_r - phi.norm().ln()).exp() - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Summary of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    /// Which suite.
    pub suite: Suite,
    /// Trials run.
    pub trials: usize,
    /// Trials whose property failed.
    pub violations: usize,
    /// Largest value of the suite's statistic.
    pub worst: f64,
    /// Up to twenty failing trials, lowest numbers first.
    pub failures: Vec<Trial>,
    /// Wall-clock time.
    pub elapsed: Duration,
}

impl SuiteReport {
    /// No violations.
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// One summary line.
    pub fn line(&self) -> String {
        format!(
            "{:<20} {:>7} trials {:>5} violations  {} = {:.3e}  ({:.2} s)",
            self.suite.name(),
            self.trials,
            self.violations,
            self.suite.metric(),
            self.worst,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Runs `count` trials of `suite` in parallel; a trial whose evaluation
/// errors counts as a violation.
pub fn run_suite_with(suite: Suite, seed: u64, count: usize) -> SuiteReport {
    let start = Instant::now();
    let results: Vec<(TrialOutcome, Option<Trial>)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let trial = Trial::generate(seed, suite, i);
            let outcome = trial.evaluate().unwrap_or(TrialOutcome {
                ok: false,
                stat: f64::NAN,
            });
            let kept = (!outcome.ok).then_some(trial);
            (outcome, kept)
        })
        .collect();
    let mut report = SuiteReport {
        suite,
        trials: count,
        violations: 0,
        worst: f64::NEG_INFINITY,
        failures: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (outcome, kept) in results {
        if outcome.stat > report.worst || outcome.stat.is_nan() {
            report.worst = outcome.stat;
        }
        if let Some(trial) = kept {
            report.violations += 1;
            if report.failures.len() < KEPT_FAILURES {
                report.failures.push(trial);
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Runs `suite` with the trial count derived from `trials`.
pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> SuiteReport {
    run_suite_with(suite, seed, suite.trial_count(trials))
}

/// Runs every suite.
pub fn run_all(seed: u64, trials: usize) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run_suite(s, seed, trials)).collect()
}

/// Re-checks every trial found in `records`.
pub fn replay(records: &[ReplayRecord]) -> Result<Vec<(Trial, TrialOutcome)>> {
    let mut groups: BTreeMap<(String, usize), Vec<ReplayRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.suite.clone(), r.trial)).or_default().push(r.clone());
    }
    groups
        .values()
        .map(|group| {
            let trial = Trial::from_records(group)?;
            let outcome = trial.evaluate()?;
            Ok((trial, outcome))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        for suite in Suite::ALL {
            if suite == Suite::ProductComparison {
                continue;
            }
            for i in 0..5 {
                assert_eq!(Trial::generate(9, suite, i), Trial::generate(9, suite, i));
            }
            assert_ne!(Trial::generate(9, suite, 0), Trial::generate(10, suite, 0));
        }
    }

    #[test]
    fn records_round_trip() {
        for suite in Suite::ALL {
            for i in 0..12 {
                let trial = Trial::generate(3, suite, i);
                let back = Trial::from_records(&trial.to_records()).unwrap();
                assert_eq!(back, trial, "{suite:?} {i}");
            }
        }
    }

    #[test]
    fn small_runs_pass() {
        for suite in [Suite::TelescopeProduct, Suite::PowerMean, Suite::SummationByParts] {
            let r = run_suite_with(suite, 5, 300);
            assert!(r.passed(), "{}", r.line());
        }
    }

    #[test]
    fn resonant_inputs_are_generated_and_rejected() {
        let resonant: Vec<Trial> = (0..200)
            .map(|i| Trial::generate(4, Suite::SummationByParts, i))
            .filter(|t| matches!(t, Trial::SummationByParts { resonant: true, .. }))
            .collect();
        assert!(resonant.len() >= 5);
        for t in &resonant {
            assert!(t.evaluate().unwrap().ok);
        }
    }

    #[test]
    fn violations_are_detected_and_replayable() {
        // a hand-made violation: claim a resonant input is fine
        let trial = Trial::SummationByParts {
            trial: 0,
            input: AbelInput {
                k: 1,
                phi: 0.5,
                gamma: vec![Complex64::new(0.1, 0.0)],
                f_value: Complex64::new(1.0, 0.0),
                eta: 0.5,
            },
            phases: None,
            resonant: false,
        };
        assert!(trial.evaluate().is_err());
        let replayed = replay(&trial.to_records());
        assert!(replayed.is_err());
    }
}
