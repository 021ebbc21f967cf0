//! Finite Verblunsky coefficient sequences.
//!
//! A [`VerblunskySequence`] stores `α_0 … α_{N−1}` and is extended by zeros
//! beyond its stored length, so every sequence describes a Bernstein–Szegő
//! measure.

use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};

/// Coefficients `α_0 … α_{N−1}` in the open unit disk, zero beyond `N−1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerblunskySequence {
    coeffs: Vec<Complex64>,
}

impl VerblunskySequence {
    /// Validates that every coefficient is finite and satisfies `|α_n| < 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        for (index, a) in coeffs.iter().enumerate() {
            let modulus = a.norm();
            if !(modulus < 1.0) {
                return Err(Error::OutsideDisk { index, modulus });
            }
        }
        Ok(Self { coeffs })
    }

    /// Real coefficients.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The free case `α ≡ 0`.
    pub fn empty() -> Self {
        Self::default()
    }

    /// `α_n = (n+2)^{−1/(2m)}` for `n < len`.
    ///
    /// For `m ≥ 1` this sequence has `δα ∈ ℓ¹` and lies in `ℓ^{2m+1}` but not
    /// in `ℓ^{2m}`, which makes it the critical example for the weight
    /// `(1−cos θ)^m`.
    pub fn test_sequence(m: u32, len: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid(
                "m",
                "must be >= 1; m = 0 is the classical Szego case",
            ));
        }
        if len == 0 {
            return Err(Error::invalid("N", "must be >= 1"));
        }
        let exponent = -1.0 / (2.0 * f64::from(m));
        let coeffs = (0..len)
            .map(|n| Complex64::new((n as f64 + 2.0).powf(exponent), 0.0))
            .collect();
        Ok(Self { coeffs })
    }

    /// `α_n = c·(n+2)^{−β}`; in `ℓ^p` iff `p·β > 1`.
    pub fn power_sequence(beta: f64, c: f64, len: usize) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::invalid("beta", "must be a finite positive number"));
        }
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::invalid("c", "must lie in (0, 1)"));
        }
        if len == 0 {
            return Err(Error::invalid("N", "must be >= 1"));
        }
        let coeffs = (0..len)
            .map(|n| Complex64::new(c * (n as f64 + 2.0).powf(-beta), 0.0))
            .collect();
        Ok(Self { coeffs })
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// True for the free case.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored coefficients.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `α_n` under the zero extension.
    pub fn get(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// `ρ_n = sqrt(1 − |α_n|²)`.
    pub fn rho(&self, n: usize) -> f64 {
        (1.0 - self.get(n).norm_sqr()).sqrt()
    }

    /// The first `n` coefficients (all of them if `n ≥ len`).
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            coeffs: self.coeffs[..n.min(self.coeffs.len())].to_vec(),
        }
    }

    /// `(Σ_n |α_n|^p)^{1/p}` over the stored support.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_norm(&self.coeffs, p)
    }

    /// `Σ_n |α_n|^p` over the stored support.
    pub fn lp_sum(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self.coeffs.iter().map(|a| a.norm().powf(p)).sum())
    }

    /// `(δα)_n = α_{n+1} − α_n` for `n < len`; the last entry is `−α_{N−1}`.
    pub fn forward_difference(&self) -> Vec<Complex64> {
        (0..self.len()).map(|n| self.get(n + 1) - self.get(n)).collect()
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("p", "must be a finite number >= 1"))
    }
}

/// `(Σ |z_n|^p)^{1/p}` for any finite list of complex values.
///
/// The sum is taken relative to the largest modulus, so large `p` does not
/// underflow.
pub fn lp_norm(values: &[Complex64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = values.iter().map(|z| (z.norm() / scale).powf(p)).sum();
    Ok(scale * sum.powf(1.0 / p))
}
