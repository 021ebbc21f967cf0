//! Prüfer variables for the unit circle.
//!
//! For `z = e^{iη}` write `φ_n(e^{iη}) = r_n(η)·e^{i(nη + θ_n(η))}`. The Szegő
//! recursion becomes the scalar recurrence
//!
//! ```text
//! log(r_{n+1}/r_n) + i(θ_{n+1} − θ_n) = log(1 − ᾱ_n e^{−i[(n+1)η + 2θ_n]}) − ½ log(1 − |α_n|²)
//! ```
//!
//! which is iterated here entirely in the log domain, so `r_n` never overflows.
//! The principal logarithm is exact: `Re(1 − ᾱ e^{iψ}) ≥ 1 − |α| > 0`.
//! Phases are kept unwrapped.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::verblunsky::VerblunskySequence;

/// `(log r_n, θ_n)` at step `n` for the spectral angle `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrueferState {
    /// `log r_n`.
    pub log_r: f64,
    /// Unwrapped phase offset `θ_n`.
    pub theta: f64,
    /// Step index `n`.
    pub n: usize,
    /// Spectral angle `η`.
    pub eta: f64,
    /// `(n+1)η + 2θ_n` reduced to `[0, 2π)`.
    pub psi: f64,
}

impl PrueferState {
    /// `r_0 = 1`, `θ_0 = 0` (from `φ_0 ≡ 1`).
    pub fn new(eta: f64) -> Self {
        Self {
            log_r: 0.0,
            theta: 0.0,
            n: 0,
            eta,
            psi: wrap(eta),
        }
    }

    /// `φ_n(e^{iη}) = r_n·e^{i(nη + θ_n)}`; overflows once `log r_n` exceeds ~709.
    pub fn phi_value(&self) -> Complex64 {
        Complex64::from_polar(self.log_r.exp(), self.n as f64 * self.eta + self.theta)
    }

    /// See [`pruefer_step`].
    pub fn step(&self, alpha: Complex64) -> Result<Self> {
        let modulus = alpha.norm();
        if !(modulus < 1.0) {
            return Err(Error::OutsideDisk {
                index: self.n,
                modulus,
            });
        }
        Ok(self.advance(alpha))
    }

    #[inline]
    fn advance(&self, alpha: Complex64) -> Self {
        let (log_r, theta) = increment(alpha, self.psi);
        Self {
            log_r: self.log_r + log_r,
            theta: self.theta + theta,
            n: self.n + 1,
            eta: self.eta,
            psi: wrap(self.psi + self.eta + 2.0 * theta),
        }
    }

    /// `(n+1)η + 2θ_n` modulo `2π`, the phase entering the next step.
    ///
    /// The reduced value is updated step by step; recomputing it from the
    /// unwrapped `θ_n` would lose about `n·ε` of absolute accuracy per step.
    #[inline]
    pub fn phase(&self) -> f64 {
        self.psi
    }
}

/// `x` reduced to `[0, 2π)`.
#[inline]
fn wrap(x: f64) -> f64 {
    let r = x % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// Real and imaginary parts of `log(1 − ᾱ e^{−iψ}) − ½ log(1 − |α|²)`.
#[inline]
fn increment(alpha: Complex64, psi: f64) -> (f64, f64) {
    if alpha.re == 0.0 && alpha.im == 0.0 {
        return (0.0, 0.0);
    }
    let (s, c) = psi.sin_cos();
    // w = ᾱ e^{−iψ}
    let w_re = alpha.re * c - alpha.im * s;
    let w_im = -(alpha.re * s + alpha.im * c);
    let abs2 = alpha.norm_sqr();
    // |1 − w|² = 1 − 2 Re w + |w|²
    let log_mod = 0.5 * (abs2 - 2.0 * w_re).ln_1p() - 0.5 * (-abs2).ln_1p();
    let arg = (-w_im).atan2(1.0 - w_re);
    (log_mod, arg)
}

/// One step of the Prüfer recurrence; rejects `|α| ≥ 1`.
pub fn pruefer_step(state: &PrueferState, alpha: Complex64) -> Result<PrueferState> {
    state.step(alpha)
}

/// Iterates the recurrence over the first `steps` coefficients of `seq`.
///
/// Steps past the stored support use `α = 0` and leave the state unchanged
/// apart from the index.
pub fn run(seq: &VerblunskySequence, eta: f64, steps: usize) -> PrueferState {
    let mut state = PrueferState::new(eta);
    for &a in seq.coeffs().iter().take(steps) {
        state = state.advance(a);
    }
    let idle = steps - state.n;
    state.psi = wrap(state.psi + idle as f64 * eta);
    state.n = steps;
    state
}

/// `log r_N(η)` for the first `n` coefficients.
pub fn log_r_partial(seq: &VerblunskySequence, eta: f64, n: usize) -> f64 {
    run(seq, eta, n).log_r
}

/// `log r_N(η)` at each checkpoint `N` in `checkpoints` (ascending), from a
/// single pass of the recurrence.
pub fn log_r_checkpoints(seq: &VerblunskySequence, eta: f64, checkpoints: &[usize], out: &mut [f64]) {
    debug_assert_eq!(checkpoints.len(), out.len());
    let mut state = PrueferState::new(eta);
    let coeffs = seq.coeffs();
    for (slot, &target) in out.iter_mut().zip(checkpoints) {
        let end = target.min(coeffs.len());
        while state.n < end {
            state = state.advance(coeffs[state.n]);
        }
        *slot = state.log_r;
    }
}

/// The phases `θ_0 … θ_n` along the recurrence.
pub fn phase_track(seq: &VerblunskySequence, eta: f64, n: usize) -> Vec<f64> {
    let mut state = PrueferState::new(eta);
    let mut track = Vec::with_capacity(n + 1);
    track.push(0.0);
    for k in 0..n {
        state = state.advance(seq.get(k));
        track.push(state.theta);
    }
    track
}

/// Result of [`log_density_limit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityLimit {
    /// `−2·log r_N(η)`, the log density of the Bernstein–Szegő measure.
    pub log_w: f64,
    /// `max − min` of `log r_n` over the final tenth of the steps.
    pub fluctuation: f64,
    /// Whether `fluctuation ≤ tol`.
    pub converged: bool,
    /// Number of recurrence steps taken.
    pub steps: usize,
}

/// `log w(η) = −2·lim log r_n(η)`, evaluated at the end of the stored support.
///
/// Past the support the recurrence is stationary, so the value is exact for
/// the Bernstein–Szegő measure of `seq`; `fluctuation` reports how far the
/// truncation is from having settled. Non-convergence is reported, not raised.
pub fn log_density_limit(seq: &VerblunskySequence, eta: f64, tol: f64) -> Result<DensityLimit> {
    if !(eta > 0.0 && eta < TAU) {
        return Err(Error::invalid("eta", "must lie in the open interval (0, 2*pi)"));
    }
    if !(tol >= 0.0) {
        return Err(Error::invalid("tol", "must be non-negative"));
    }
    let steps = seq.len();
    let window_start = steps - steps.div_ceil(10);
    let mut state = PrueferState::new(eta);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    if window_start == 0 {
        lo = 0.0;
        hi = 0.0;
    }
    for &a in seq.coeffs() {
        state = state.advance(a);
        if state.n >= window_start {
            lo = lo.min(state.log_r);
            hi = hi.max(state.log_r);
        }
    }
    let fluctuation = if steps == 0 { 0.0 } else { hi - lo };
    Ok(DensityLimit {
        log_w: -2.0 * state.log_r,
        fluctuation,
        converged: fluctuation <= tol,
        steps,
    })
}

/// `Σ_{n<N} α_n^I ᾱ_n^J e^{i(I−J)[(n+1)η + 2θ_n]}` with `θ_n` from the
/// recurrence on the same sequence. Requires `I − 1 ≥ J ≥ 0`.
pub fn oscillatory_sum(seq: &VerblunskySequence, i: u32, j: u32, eta: f64, n: usize) -> Result<Complex64> {
    if i < j + 1 {
        return Err(Error::invalid("I", "must satisfy I - 1 >= J >= 0"));
    }
    let freq = f64::from(i - j);
    let mut state = PrueferState::new(eta);
    let mut sum = Complex64::default();
    for &a in seq.coeffs().iter().take(n) {
        let amplitude = a.powu(i) * a.conj().powu(j);
        sum += amplitude * Complex64::from_polar(1.0, freq * state.phase());
        state = state.advance(a);
    }
    Ok(sum)
}

/// Inputs of the summation-by-parts transform.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelInput {
    /// Integer frequency `k`.
    pub k: i64,
    /// Phase shift `φ ∈ [0, 2π)`.
    pub phi: f64,
    /// `Γ_0 … Γ_{L−1}`, zero beyond.
    pub gamma: Vec<Complex64>,
    /// Coefficient `f(η)`.
    pub f_value: Complex64,
    /// Spectral angle `η`.
    pub eta: f64,
}

/// `S` together with its a-priori bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelSum {
    /// The (finite) series `S`.
    pub sum: Complex64,
    /// `2|g(η)|·Σ_n |e^{iφ}Γ_{n+1} − Γ_n|`.
    pub bound: f64,
    /// `g(η) = f(η)/(e^{−i(kη−φ)} − 1)`.
    pub g_value: Complex64,
}

/// Smallest admissible `|e^{−i(kη−φ)} − 1|`.
pub const RESONANCE_THRESHOLD: f64 = 1e-12;

impl AbelInput {
    fn validate(&self) -> Result<Complex64> {
        if !(0.0..TAU).contains(&self.phi) {
            return Err(Error::invalid("phi", "must lie in [0, 2*pi)"));
        }
        if self.k == 0 && self.phi == 0.0 {
            return Err(Error::invalid("k", "k and phi must not both be 0"));
        }
        if !self.eta.is_finite() {
            return Err(Error::invalid("eta", "must be finite"));
        }
        let frequency = self.k as f64 * self.eta - self.phi;
        let denominator = Complex64::from_polar(1.0, -frequency) - 1.0;
        let modulus = denominator.norm();
        if modulus < RESONANCE_THRESHOLD {
            return Err(Error::Resonant {
                k: self.k,
                phi: self.phi,
                eta: self.eta,
                frequency,
                modulus,
            });
        }
        Ok(self.f_value / denominator)
    }

    fn phases<'a>(&self, phases: Option<&'a [f64]>) -> Result<PhaseTrack<'a>> {
        match phases {
            None => Ok(PhaseTrack(None)),
            Some(p) if p.len() > self.gamma.len() => Ok(PhaseTrack(Some(p))),
            Some(_) => Err(Error::invalid("phases", "need theta_0 .. theta_L (L + 1 values)")),
        }
    }

    /// `e^{ik[mη + 2θ_n]}`.
    fn wave(&self, m: usize, theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.k as f64 * (m as f64 * self.eta + 2.0 * theta))
    }

    /// The defining series of `S`, summed term by term.
    ///
    /// `phases` supplies `θ_0 … θ_L`; `None` means `θ ≡ 0`.
    pub fn direct_sum(&self, phases: Option<&[f64]>) -> Result<Complex64> {
        let g = self.validate()?;
        let track = self.phases(phases)?;
        let k = self.k as f64;
        let mut sum = Complex64::default();
        for (n, &gamma) in self.gamma.iter().enumerate() {
            let (theta, theta_next) = (track.at(n), track.at(n + 1));
            let base = gamma * self.wave(n + 1, theta);
            let drift = Complex64::from_polar(1.0, 2.0 * k * (theta_next - theta)) - 1.0;
            sum += self.f_value * base - g * base * drift;
        }
        Ok(sum)
    }
}

struct PhaseTrack<'a>(Option<&'a [f64]>);

impl PhaseTrack<'_> {
    fn at(&self, n: usize) -> f64 {
        self.0.map_or(0.0, |p| p[n])
    }
}

/// Summation by parts for `S = Σ_n (f Γ_n e^{ik[(n+1)η+2θ_n]} − g Γ_n e^{ik[(n+1)η+2θ_n]}(e^{2ik(θ_{n+1}−θ_n)} − 1))`.
///
/// With `g = f/(e^{−i(kη−φ)} − 1)` the series telescopes to
///
/// ```text
/// S = g·( e^{iφ}Γ_0 e^{2ikθ_0} + Σ_{n≥0} (e^{iφ}Γ_{n+1} − Γ_n)·e^{ik[(n+1)η + 2θ_{n+1}]} )
/// ```
///
/// and `|S| ≤ 2|g|·Σ_n |e^{iφ}Γ_{n+1} − Γ_n|`. `phases` supplies `θ_0 … θ_L`
/// (for instance from [`phase_track`]); `None` runs the standalone `θ ≡ 0` form.
pub fn abel_transform(input: &AbelInput, phases: Option<&[f64]>) -> Result<AbelSum> {
    let g = input.validate()?;
    let track = input.phases(phases)?;
    let shift = Complex64::from_polar(1.0, input.phi);
    let len = input.gamma.len();
    let gamma = |n: usize| input.gamma.get(n).copied().unwrap_or_default();

    let mut telescoped = shift * gamma(0) * input.wave(0, track.at(0));
    let mut variation = 0.0;
    for n in 0..len {
        let jump = shift * gamma(n + 1) - gamma(n);
        variation += jump.norm();
        telescoped += jump * input.wave(n + 1, track.at(n + 1));
    }
    Ok(AbelSum {
        sum: g * telescoped,
        bound: 2.0 * g.norm() * variation,
        g_value: g,
    })
}
