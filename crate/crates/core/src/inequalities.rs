//! Executable checks of the elementary inequalities behind the higher-order
//! Szegő theorem.
//!
//! Every check returns the two sides it compares together with a verdict, so
//! callers can report margins as well as failures. Floating-point slack is
//! [`LOCAL_SLACK`] for single comparisons and [`AGGREGATE_SLACK`] for sums.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::verblunsky::VerblunskySequence;

/// Slack added to right-hand sides of pointwise inequalities.
pub const LOCAL_SLACK: f64 = 1e-12;
/// Slack added to right-hand sides of inequalities between sums.
pub const AGGREGATE_SLACK: f64 = 1e-10;

/// Both sides of an inequality `lhs ≤ rhs` and whether it held.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    /// Left-hand side.
    pub lhs: f64,
    /// Right-hand side, without slack.
    pub rhs: f64,
    /// `lhs ≤ rhs + slack`.
    pub ok: bool,
}

impl Check {
    fn new(lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            lhs,
            rhs,
            ok: lhs <= rhs + slack,
        }
    }

    /// `lhs − rhs`; positive values are violations before slack.
    pub fn excess(&self) -> f64 {
        self.lhs - self.rhs
    }
}

fn check_disk(z: &[Complex64]) -> Result<()> {
    match z.iter().position(|v| !(v.norm() < 1.0)) {
        Some(index) => Err(Error::OutsideDisk {
            index,
            modulus: z[index].norm(),
        }),
        None => Ok(()),
    }
}

/// `|z_1⋯z_k − z'_1⋯z'_k| ≤ k·max_j |z_j − z'_j|` for points of the open disk.
pub fn check_telescope_product(z: &[Complex64], z_prime: &[Complex64]) -> Result<Check> {
    if z.is_empty() || z.len() != z_prime.len() {
        return Err(Error::invalid(
            "z_prime",
            format!("needs the same non-zero length as z ({} vs {})", z.len(), z_prime.len()),
        ));
    }
    check_disk(z)?;
    check_disk(z_prime)?;
    let product = |v: &[Complex64]| v.iter().product::<Complex64>();
    let lhs = (product(z) - product(z_prime)).norm();
    let max_gap = z.iter().zip(z_prime).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(Check::new(lhs, z.len() as f64 * max_gap, LOCAL_SLACK))
}

/// `|(z_1^k + ⋯ + z_k^k)/k − z_1⋯z_k| ≤ (k−1)²·max_{i,j} |z_i − z_j|²`.
pub fn check_power_mean(z: &[Complex64]) -> Result<Check> {
    if z.is_empty() {
        return Err(Error::invalid("z", "must not be empty"));
    }
    check_disk(z)?;
    let k = z.len();
    let mean = z.iter().map(|v| v.powu(k as u32)).sum::<Complex64>() / k as f64;
    let lhs = (mean - z.iter().product::<Complex64>()).norm();
    let mut spread: f64 = 0.0;
    for (i, a) in z.iter().enumerate() {
        for b in &z[i + 1..] {
            spread = spread.max((a - b).norm_sqr());
        }
    }
    let km1 = (k - 1) as f64;
    Ok(Check::new(lhs, km1 * km1 * spread, LOCAL_SLACK))
}

/// Index tuple `t ∈ {0,…,l}^{2k}` with `1 ≤ k ≤ l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSpec {
    l: usize,
    k: usize,
    t: Vec<usize>,
}

impl TupleSpec {
    /// Validates `1 ≤ k ≤ l`, `t.len() = 2k` and every `t_i ≤ l`.
    pub fn new(l: usize, k: usize, t: Vec<usize>) -> Result<Self> {
        if k == 0 || k > l {
            return Err(Error::invalid("k", format!("need 1 <= k <= l, got k = {k}, l = {l}")));
        }
        if t.len() != 2 * k {
            return Err(Error::invalid("t", format!("needs 2k = {} entries, got {}", 2 * k, t.len())));
        }
        if let Some(bad) = t.iter().find(|&&ti| ti > l) {
            return Err(Error::invalid("t", format!("entry {bad} exceeds l = {l}")));
        }
        Ok(Self { l, k, t })
    }

    /// Range bound `l`.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Fold count `k`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The `2k` offsets `t_1 … t_{2k}`.
    pub fn t(&self) -> &[usize] {
        &self.t
    }
}

/// Worst case of an inequality checked at every `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermwiseCheck {
    /// The comparison with the largest `lhs − rhs`.
    pub worst: Check,
    /// Index `n` of `worst`.
    pub worst_index: usize,
    /// Number of comparisons that failed.
    pub violations: usize,
    /// Number of comparisons made.
    pub checked: usize,
}

impl TermwiseCheck {
    fn new() -> Self {
        Self {
            worst: Check {
                lhs: 0.0,
                rhs: 0.0,
                ok: true,
            },
            worst_index: 0,
            violations: 0,
            checked: 0,
        }
    }

    fn record(&mut self, n: usize, check: Check) {
        if self.checked == 0 || check.excess() > self.worst.excess() {
            self.worst = check;
            self.worst_index = n;
        }
        self.checked += 1;
        self.violations += usize::from(!check.ok);
    }

    /// No comparison failed.
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// All assertions made by [`check_product_comparison`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProductComparison {
    /// `|α_{n+t_i} − α_{n+t_j}|² ≤ (Σ_{q<l} |δα_{n+q}|)²` for every `n` and pair.
    pub chain_triangle: TermwiseCheck,
    /// `(Σ_{q<l} |δα_{n+q}|)² ≤ l·Σ_{q<l} |δα_{n+q}|²` for every `n`.
    pub chain_cauchy_schwarz: TermwiseCheck,
    /// `|β_n − β'_n|² ≤ k²·l·Σ_{q<l} |δα_{n+q}|²`.
    pub product_gap: TermwiseCheck,
    /// `||β_n|² − (1/k)Σ_j |α_{n+t_{2j−1}}|^{2k}| ≤ 4(k−1)²·l·Σ_{q<l} |δα_{n+q}|²`.
    pub modulus_odd: TermwiseCheck,
    /// The same for `β'_n` and the even offsets.
    pub modulus_even: TermwiseCheck,
    /// `Σ_n |Re β_n conj(β'_n) − (1/2k)Σ_i |α_{n+t_i}|^{2k}|` against
    /// `(9/2)(k−1)² l² ‖δα‖²` for `k ≥ 2` and `½ l² ‖δα‖²` for `k = 1`.
    pub aggregate: Check,
    /// `Σ_n (|α_{n+t_i}|^{2k} − |α_n|^{2k}) = −Σ_{n<t_i} |α_n|^{2k}`, worst offset;
    /// `lhs` is the absolute discrepancy and `rhs` the allowed slack.
    pub telescoping: Check,
}

impl ProductComparison {
    /// Whether every assertion held.
    pub fn ok(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of the assertions that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let termwise = [
            ("chain_triangle", &self.chain_triangle),
            ("chain_cauchy_schwarz", &self.chain_cauchy_schwarz),
            ("product_gap", &self.product_gap),
            ("modulus_odd", &self.modulus_odd),
            ("modulus_even", &self.modulus_even),
        ];
        let mut failed: Vec<&'static str> = termwise.iter().filter(|(_, c)| !c.ok()).map(|(n, _)| *n).collect();
        if !self.aggregate.ok {
            failed.push("aggregate");
        }
        if !self.telescoping.ok {
            failed.push("telescoping");
        }
        failed
    }
}

/// Compares the `k`-fold products `β_n = Π_j α_{n+t_{2j−1}}` and
/// `β'_n = Π_j α_{n+t_{2j}}` with the diagonal `|α|^{2k}` over
/// `n = 0 … N−1`, on the truncation of `seq` to its first `N` entries
/// extended by zeros.
pub fn check_product_comparison(seq: &VerblunskySequence, spec: &TupleSpec, n: usize) -> Result<ProductComparison> {
    let (l, k) = (spec.l, spec.k);
    let len = n.min(seq.len());
    let alpha = |j: usize| if j < len { seq.coeffs()[j] } else { Complex64::default() };
    let delta: Vec<f64> = (0..n + l).map(|j| (alpha(j + 1) - alpha(j)).norm()).collect();
    let delta_sq_total: f64 = delta.iter().map(|d| d * d).sum();
    let power = |z: Complex64| z.norm_sqr().powi(k as i32);

    let kf = k as f64;
    let lf = l as f64;
    let km1_sq = (kf - 1.0) * (kf - 1.0);
    let mut chain_triangle = TermwiseCheck::new();
    let mut chain_cauchy_schwarz = TermwiseCheck::new();
    let mut product_gap = TermwiseCheck::new();
    let mut modulus_odd = TermwiseCheck::new();
    let mut modulus_even = TermwiseCheck::new();
    let mut aggregate_lhs = 0.0;
    let mut values = Vec::with_capacity(2 * k);

    for m in 0..n {
        values.clear();
        values.extend(spec.t.iter().map(|&ti| alpha(m + ti)));
        let window = &delta[m..m + l];
        let path: f64 = window.iter().sum();
        let energy: f64 = window.iter().map(|d| d * d).sum();

        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                chain_triangle.record(m, Check::new((a - b).norm_sqr(), path * path, LOCAL_SLACK));
            }
        }
        chain_cauchy_schwarz.record(m, Check::new(path * path, lf * energy, LOCAL_SLACK));

        let beta: Complex64 = values.iter().step_by(2).product();
        let beta_prime: Complex64 = values.iter().skip(1).step_by(2).product();
        product_gap.record(m, Check::new((beta - beta_prime).norm_sqr(), kf * kf * lf * energy, LOCAL_SLACK));

        let odd_mean = values.iter().step_by(2).map(|&z| power(z)).sum::<f64>() / kf;
        let even_mean = values.iter().skip(1).step_by(2).map(|&z| power(z)).sum::<f64>() / kf;
        let modulus_rhs = 4.0 * km1_sq * lf * energy;
        modulus_odd.record(m, Check::new((beta.norm_sqr() - odd_mean).abs(), modulus_rhs, LOCAL_SLACK));
        modulus_even.record(m, Check::new((beta_prime.norm_sqr() - even_mean).abs(), modulus_rhs, LOCAL_SLACK));

        aggregate_lhs += ((beta * beta_prime.conj()).re - 0.5 * (odd_mean + even_mean)).abs();
    }

    let constant = if k == 1 { 0.5 } else { 4.5 * km1_sq };
    let aggregate = Check::new(aggregate_lhs, constant * lf * lf * delta_sq_total, AGGREGATE_SLACK);

    let mut telescoping = Check {
        lhs: 0.0,
        rhs: AGGREGATE_SLACK,
        ok: true,
    };
    let scale: f64 = (0..len).map(|j| power(alpha(j))).sum::<f64>().max(1.0);
    for &ti in &spec.t {
        let shifted: f64 = (0..n).map(|m| power(alpha(m + ti)) - power(alpha(m))).sum();
        let closed: f64 = -(0..ti).map(|m| power(alpha(m))).sum::<f64>();
        let check = Check::new((shifted - closed).abs(), AGGREGATE_SLACK * scale, 0.0);
        if check.excess() > telescoping.excess() {
            telescoping = check;
        }
    }

    Ok(ProductComparison {
        chain_triangle,
        chain_cauchy_schwarz,
        product_gap,
        modulus_odd,
        modulus_even,
        aggregate,
        telescoping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn telescope_product_examples() {
        let r = check_telescope_product(&[c(0.3, 0.4)], &[c(-0.1, 0.2)]).unwrap();
        assert_relative_eq!(r.lhs, r.rhs, max_relative = 1e-15);
        assert!(r.ok);
        let z = [c(0.5, 0.1), c(-0.2, 0.7), c(0.0, -0.9)];
        let r = check_telescope_product(&z, &z).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.ok);
        assert!(check_telescope_product(&z, &z[..2]).is_err());
        assert!(check_telescope_product(&[c(1.0, 0.0)], &[c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn power_mean_examples() {
        let r = check_power_mean(&[c(0.4, -0.3); 4]).unwrap();
        assert!(r.lhs < 1e-15 && r.ok);
        let r = check_power_mean(&[c(0.4, -0.3)]).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        // k = 2: |(a² + b²)/2 − ab| = |a − b|²/2
        let r = check_power_mean(&[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        assert_relative_eq!(r.lhs, 0.5);
        assert_relative_eq!(r.rhs, 1.0);
        assert!(check_power_mean(&[]).is_err());
    }

    #[test]
    fn tuple_spec_validation() {
        assert!(TupleSpec::new(2, 1, vec![0, 2]).is_ok());
        assert!(TupleSpec::new(2, 0, vec![]).is_err());
        assert!(TupleSpec::new(2, 3, vec![0; 6]).is_err());
        assert!(TupleSpec::new(2, 1, vec![0, 3]).is_err());
        assert!(TupleSpec::new(2, 2, vec![0, 1]).is_err());
    }

    #[test]
    fn constant_tuple_gives_vanishing_summands() {
        let seq = VerblunskySequence::test_sequence(1, 200).unwrap();
        let spec = TupleSpec::new(1, 1, vec![0, 0]).unwrap();
        let r = check_product_comparison(&seq, &spec, 200).unwrap();
        assert!(r.aggregate.lhs < 1e-15);
        assert!(r.ok(), "{:?}", r.failures());
    }

    #[test]
    fn k_one_reduces_to_half_squared_gaps() {
        let seq = VerblunskySequence::new((0..50).map(|n| Complex64::from_polar(0.8 / (1.0 + n as f64), 0.3 * n as f64)).collect()).unwrap();
        let spec = TupleSpec::new(3, 1, vec![3, 1]).unwrap();
        let r = check_product_comparison(&seq, &spec, 50).unwrap();
        let expected: f64 = (0..50).map(|n| 0.5 * (seq.get(n + 3) - seq.get(n + 1)).norm_sqr()).sum();
        assert_relative_eq!(r.aggregate.lhs, expected, max_relative = 1e-12);
        assert!(r.ok(), "{:?}", r.failures());
    }

    #[test]
    fn truncation_beyond_support() {
        let seq = VerblunskySequence::from_real(&[0.5, 0.25]).unwrap();
        let spec = TupleSpec::new(2, 2, vec![0, 1, 2, 0]).unwrap();
        let r = check_product_comparison(&seq, &spec, 10).unwrap();
        assert!(r.ok(), "{:?}", r.failures());
        assert_eq!(r.chain_cauchy_schwarz.checked, 10);
        assert_eq!(r.chain_triangle.checked, 10 * 6);
    }
}
