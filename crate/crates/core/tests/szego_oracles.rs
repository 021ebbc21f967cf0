mod common;

use num_complex::Complex64;
use opuc_core::pruefer::{self, PrueferState};
use opuc_core::quadrature::integrate_panels;
use opuc_core::szego::{evaluate_pointwise, BernsteinSzego, PolynomialPair};
use opuc_core::VerblunskySequence;
use rand::Rng;
use std::f64::consts::TAU;

/// `⟨φ_j, φ_k⟩` in `L²(w dθ/2π)` by adaptive Gauss–Kronrod. Zeros of `φ_N`
/// close to the circle make `w` sharply peaked, which defeats fixed grids.
fn gram(pair_list: &[PolynomialPair], density: &BernsteinSzego) -> Vec<Vec<Complex64>> {
    let n = pair_list.len();
    let mut integrand = |theta: f64, out: &mut [f64]| {
        let w = density.density(theta) / TAU;
        let values: Vec<Complex64> = pair_list.iter().map(|p| p.evaluate(theta).0).collect();
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
    let sum = integrate_panels(&mut integrand, 2 * n * n, &panels, 1e-11, 200_000).unwrap();
    (0..n)
        .map(|a| (0..n).map(|b| Complex64::new(sum.values[2 * (a * n + b)], sum.values[2 * (a * n + b) + 1])).collect())
        .collect()
}

#[test]
fn bernstein_szego_polynomials_are_orthonormal() {
    let mut rng = common::rng(1);
    for _ in 0..20 {
        let len = rng.gen_range(1..=8);
        let seq = common::random_sequence(&mut rng, len, 0.9);
        let mut pairs = vec![PolynomialPair::initial()];
        for &a in seq.coeffs() {
            let next = pairs.last().unwrap().step(a).unwrap();
            pairs.push(next);
        }
        let g = gram(&pairs, &BernsteinSzego::new(&seq));
        for (a, row) in g.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((v - target).norm() <= 1e-8, "({a},{b}) = {v} for {:?}", seq.coeffs());
            }
        }
    }
}

#[test]
fn pruefer_matches_polynomial_values() {
    let mut rng = common::rng(2);
    for _ in 0..10 {
        let seq = common::random_sequence(&mut rng, 500, 0.9);
        for i in 0..50 {
            let eta = TAU * (i as f64 + 0.5) / 50.0;
            let mut state = PrueferState::new(eta);
            for n in 0..seq.len() {
                state = state.step(seq.get(n)).unwrap();
                let (phi, _) = evaluate_pointwise(&seq.truncated(n + 1), eta);
                let rel = (state.log_r - phi.norm().ln()).exp() - 1.0;
                assert!(rel.abs() <= 1e-9, "n = {n}, eta = {eta}: {rel}");
                if n < 12 {
                    let dense = PolynomialPair::from_sequence(&seq.truncated(n + 1)).evaluate(eta).0;
                    assert!((state.phi_value() - dense).norm() <= 1e-9 * dense.norm());
                }
            }
        }
    }
}

#[test]
fn pointwise_values_agree_with_coefficients_for_moderate_degree() {
    // keep the coefficients comparable to |φ| on the circle so Horner is accurate
    let seq = VerblunskySequence::new((0..30).map(|n| Complex64::from_polar(0.4, 1.1 * n as f64)).collect()).unwrap();
    let pair = PolynomialPair::from_sequence(&seq);
    for theta in [0.05, 0.7, 2.0, 3.1, 5.5] {
        let (a, b) = pair.evaluate(theta);
        let (p, q) = evaluate_pointwise(&seq, theta);
        assert!((a - p).norm() <= 1e-10 * a.norm());
        assert!((b - q).norm() <= 1e-10 * b.norm());
    }
}

#[test]
fn log_density_agrees_between_routes() {
    let mut rng = common::rng(3);
    let seq = common::random_sequence(&mut rng, 40, 0.8);
    let bs = BernsteinSzego::new(&seq);
    for i in 1..50 {
        let eta = TAU * i as f64 / 50.0;
        let via_pruefer = -2.0 * pruefer::log_r_partial(&seq, eta, seq.len());
        assert!((via_pruefer - bs.log_density(eta)).abs() <= 1e-10 * via_pruefer.abs().max(1.0));
    }
}
