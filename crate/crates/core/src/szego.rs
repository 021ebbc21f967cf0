//! The Szegő recursion on dense monomial coefficients.
//!
//! `φ_{n+1}(z) = (z·φ_n(z) − ᾱ_n·φ_n*(z)) / ρ_n`, where the reversed
//! polynomial `φ_n*(z) = zⁿ·conj(φ_n(1/z̄))` is recomputed from `φ_n` by
//! conjugated reversal after every step.
//!
//! Coefficients grow like `∏ ρ_j^{-1}` and eventually overflow; keep degrees
//! at or below [`RECOMMENDED_MAX_DEGREE`] and use [`crate::pruefer`] beyond it.
//! Even below that, Horner evaluation on the circle loses accuracy when the
//! coefficients are much larger than `|φ_n|` there, so densities are computed
//! by [`evaluate_pointwise`], which runs the recursion on values.

use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::verblunsky::VerblunskySequence;

/// Largest degree for which dense coefficient storage is recommended.
pub const RECOMMENDED_MAX_DEGREE: usize = 2000;

/// Monomial coefficients of `φ_n` and `φ_n*`, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPair {
    phi: Vec<Complex64>,
    phi_star: Vec<Complex64>,
}

impl Default for PolynomialPair {
    fn default() -> Self {
        Self::initial()
    }
}

impl PolynomialPair {
    /// `φ_0 = φ_0* = 1`.
    pub fn initial() -> Self {
        let one = alloc::vec![Complex64::new(1.0, 0.0)];
        Self {
            phi: one.clone(),
            phi_star: one,
        }
    }

    /// Runs the recursion over every coefficient of `seq`.
    pub fn from_sequence(seq: &VerblunskySequence) -> Self {
        seq.coeffs().iter().fold(Self::initial(), |pair, &a| {
            // coefficients of a validated sequence are inside the disk
            pair.advance(a)
        })
    }

    /// Degree `n`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Coefficients of `φ_n`.
    pub fn phi(&self) -> &[Complex64] {
        &self.phi
    }

    /// Coefficients of `φ_n*`.
    pub fn phi_star(&self) -> &[Complex64] {
        &self.phi_star
    }

    /// Coefficient of `zⁿ` in `φ_n`, equal to `∏_{j<n} ρ_j^{-1}`.
    pub fn leading_coefficient(&self) -> Complex64 {
        self.phi[self.degree()]
    }

    /// One step of the recursion; see [`szego_step`].
    pub fn step(&self, alpha: Complex64) -> Result<Self> {
        let modulus = alpha.norm();
        if !(modulus < 1.0) {
            return Err(Error::OutsideDisk {
                index: self.degree(),
                modulus,
            });
        }
        Ok(self.advance(alpha))
    }

    fn advance(&self, alpha: Complex64) -> Self {
        let n = self.degree();
        let rho_inv = 1.0 / (1.0 - alpha.norm_sqr()).sqrt();
        let alpha_bar = alpha.conj();
        let phi: Vec<Complex64> = (0..=n + 1)
            .map(|j| {
                let shifted = if j == 0 { Complex64::default() } else { self.phi[j - 1] };
                let reversed = self.phi_star.get(j).copied().unwrap_or_default();
                (shifted - alpha_bar * reversed) * rho_inv
            })
            .collect();
        let phi_star = phi.iter().rev().map(|c| c.conj()).collect();
        Self { phi, phi_star }
    }

    /// `(φ_n(e^{iθ}), φ_n*(e^{iθ}))` by Horner's rule.
    pub fn evaluate(&self, theta: f64) -> (Complex64, Complex64) {
        let z = Complex64::from_polar(1.0, theta);
        (horner(&self.phi, z), horner(&self.phi_star, z))
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::default(), |acc, &c| acc * z + c)
}

/// `φ_{n+1}` from `φ_n` and `α_n`; rejects `|α_n| ≥ 1`.
pub fn szego_step(pair: &PolynomialPair, alpha: Complex64) -> Result<PolynomialPair> {
    pair.step(alpha)
}

/// `(φ_n(e^{iθ}), φ_n*(e^{iθ}))`.
pub fn evaluate_pair(pair: &PolynomialPair, theta: f64) -> (Complex64, Complex64) {
    pair.evaluate(theta)
}

/// `(φ_n(e^{iθ}), φ_n*(e^{iθ}))` for `n = seq.len()`, by running the recursion
/// on the two values at the point rather than on coefficients.
///
/// Unlike [`PolynomialPair::evaluate`] this does not suffer from cancellation
/// among large coefficients, so it stays accurate at any degree (until the
/// values themselves overflow).
pub fn evaluate_pointwise(seq: &VerblunskySequence, theta: f64) -> (Complex64, Complex64) {
    let z = Complex64::from_polar(1.0, theta);
    seq.coeffs().iter().fold(
        (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        |(phi, phi_star), &a| {
            let rho_inv = 1.0 / (1.0 - a.norm_sqr()).sqrt();
            let zphi = z * phi;
            ((zphi - a.conj() * phi_star) * rho_inv, (phi_star - a * zphi) * rho_inv)
        },
    )
}

/// The Bernstein–Szegő density `w_N(θ) = 1/|φ_N(e^{iθ})|²` of the measure whose
/// Verblunsky coefficients are `seq` followed by zeros.
pub fn bernstein_szego_density(seq: &VerblunskySequence, theta: f64) -> f64 {
    1.0 / evaluate_pointwise(seq, theta).0.norm_sqr()
}

/// A Bernstein–Szegő measure, evaluated through [`evaluate_pointwise`].
#[derive(Debug, Clone)]
pub struct BernsteinSzego {
    seq: VerblunskySequence,
}

impl BernsteinSzego {
    /// The measure with Verblunsky coefficients `seq`, then zeros.
    pub fn new(seq: &VerblunskySequence) -> Self {
        Self { seq: seq.clone() }
    }

    /// The coefficients.
    pub fn sequence(&self) -> &VerblunskySequence {
        &self.seq
    }

    /// `1/|φ_N(e^{iθ})|²`.
    pub fn density(&self, theta: f64) -> f64 {
        bernstein_szego_density(&self.seq, theta)
    }

    /// `−2·log|φ_N(e^{iθ})|`.
    pub fn log_density(&self, theta: f64) -> f64 {
        -evaluate_pointwise(&self.seq, theta).0.norm_sqr().ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_case_is_monomial() {
        let mut pair = PolynomialPair::initial();
        for _ in 0..5 {
            pair = szego_step(&pair, c(0.0, 0.0)).unwrap();
        }
        assert_eq!(pair.degree(), 5);
        for (j, coef) in pair.phi().iter().enumerate() {
            assert_eq!(*coef, if j == 5 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        }
        for (j, coef) in pair.phi_star().iter().enumerate() {
            assert_eq!(*coef, if j == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        }
    }

    #[test]
    fn single_step_matches_hand_computation() {
        // φ_1(z) = (2z − 1)/√3 for α_0 = 1/2
        let pair = szego_step(&PolynomialPair::initial(), c(0.5, 0.0)).unwrap();
        let s3 = 3f64.sqrt();
        assert_relative_eq!(pair.phi()[0].re, -1.0 / s3, max_relative = 1e-15);
        assert_relative_eq!(pair.phi()[1].re, 2.0 / s3, max_relative = 1e-15);
        assert_relative_eq!(pair.phi_star()[0].re, 2.0 / s3, max_relative = 1e-15);
        assert_relative_eq!(pair.phi_star()[1].re, -1.0 / s3, max_relative = 1e-15);
        let (phi, _) = pair.evaluate(0.0);
        assert_relative_eq!(phi.norm(), 1.0 / s3, max_relative = 1e-14);
        assert_relative_eq!(phi.norm(), 0.57735, epsilon = 1e-5);
    }

    #[test]
    fn step_rejects_points_outside_disk() {
        let pair = PolynomialPair::initial();
        assert!(matches!(
            szego_step(&pair, c(1.0, 0.0)),
            Err(Error::OutsideDisk { index: 0, .. })
        ));
        assert!(szego_step(&pair, c(0.8, 0.7)).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let mut pair = PolynomialPair::initial();
        for _ in 0..3 {
            pair = pair.step(c(0.0, 0.0)).unwrap();
        }
        let (phi, phi_star) = evaluate_pair(&pair, PI / 2.0);
        assert!((phi - c(0.0, -1.0)).norm() < 1e-15);
        assert!((phi_star - c(1.0, 0.0)).norm() < 1e-15);

        let seq = VerblunskySequence::new(alloc::vec![c(0.3, -0.2), c(-0.5, 0.1), c(0.2, 0.6)]).unwrap();
        let pair = PolynomialPair::from_sequence(&seq);
        for theta in [0.1, 1.3, 4.0] {
            let (a, b) = pair.evaluate(theta);
            let (a2, b2) = pair.evaluate(theta + TAU);
            assert!((a - a2).norm() < 1e-13 && (b - b2).norm() < 1e-13);
        }
    }

    #[test]
    fn density_examples() {
        assert_eq!(bernstein_szego_density(&VerblunskySequence::empty(), 0.7), 1.0);
        let seq = VerblunskySequence::from_real(&[0.5]).unwrap();
        assert_relative_eq!(bernstein_szego_density(&seq, 0.0), 3.0, max_relative = 1e-14);
        // closed form (1−a²)/(1 − 2a cos θ + a²)
        for theta in [0.3f64, 1.0, 2.5, 5.9] {
            let closed = 0.75 / (1.0 - theta.cos() + 0.25);
            assert_relative_eq!(bernstein_szego_density(&seq, theta), closed, max_relative = 1e-13);
        }
    }

    #[test]
    fn leading_coefficient_and_reversal() {
        let seq = VerblunskySequence::new(
            (0..12).map(|n| Complex64::from_polar(0.8 / (1.0 + n as f64 * 0.3), 0.7 * n as f64)).collect(),
        )
        .unwrap();
        let pair = PolynomialPair::from_sequence(&seq);
        let expected: f64 = (0..12).map(|n| 1.0 / seq.rho(n)).product();
        let lead = pair.leading_coefficient();
        assert_relative_eq!(lead.re, expected, max_relative = 1e-12);
        assert!(lead.im.abs() <= 1e-12 * expected);
        for k in 0..256 {
            let theta = TAU * k as f64 / 256.0;
            let (a, b) = pair.evaluate(theta);
            assert_relative_eq!(a.norm(), b.norm(), max_relative = 1e-12);
            let (p, q) = evaluate_pointwise(&seq, theta);
            assert!((p - a).norm() <= 1e-12 * a.norm());
            assert!((q - b).norm() <= 1e-12 * b.norm());
        }
    }
}
