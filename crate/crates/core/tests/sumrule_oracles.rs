mod common;

use num_complex::Complex64;
use opuc_core::quadrature::GridSpec;
use opuc_core::sumrule::*;
use opuc_core::szego::BernsteinSzego;
use opuc_core::VerblunskySequence;
use rand::Rng;
use std::f64::consts::{PI, TAU};

#[test]
fn weight_coefficients_match_discrete_fourier_transform() {
    // (1 − cos θ)^m has degree m < 32, so a 64-point DFT recovers b_k exactly
    for m in 0..=8u32 {
        let b = weight_poly_coeffs(m);
        for k in -(m as i64) - 2..=(m as i64) + 2 {
            let dft: Complex64 = (0..64)
                .map(|j| {
                    let theta = TAU * j as f64 / 64.0;
                    Complex64::from_polar((1.0 - theta.cos()).powi(m as i32) / 64.0, k as f64 * theta)
                })
                .sum();
            assert!((dft.re - b.get(k)).abs() <= 1e-13, "m = {m}, k = {k}");
            assert!(dft.im.abs() <= 1e-13);
        }
        for j in 0..256 {
            let theta = TAU * j as f64 / 256.0;
            assert!((b.evaluate(theta) - (1.0 - theta.cos()).powi(m as i32)).abs() <= 1e-12);
        }
    }
}

#[test]
fn constant_density_integrates_to_zero() {
    for m in 0..4 {
        let z = z_integral(|_| Ok(0.0), m, &GridSpec::default()).unwrap();
        assert_eq!(z.value, 0.0);
        assert_eq!((z.positive_part, z.negative_part), (0.0, 0.0));
        assert!(z.is_converged());
    }
}

#[test]
fn single_coefficient_gives_log_three_quarters() {
    let seq = VerblunskySequence::from_real(&[0.5]).unwrap();
    let grid = GridSpec::fixed(GridSpec::panels_for_points(1 << 14));
    let z = z_integral(bernstein_szego_log_density(&seq), 0, &grid).unwrap();
    assert!((z.value - 0.75f64.ln()).abs() <= 1e-12, "{}", z.value);
    assert!((z.value + 0.287682).abs() <= 1e-6);
    assert!((z.value - (z.positive_part - z.negative_part)).abs() <= 1e-14);
    assert_eq!(szego_identity_m0(&seq), 0.75f64.ln());
    assert_eq!(szego_identity_m0(&VerblunskySequence::empty()), 0.0);
}

#[test]
fn zeroth_order_sum_rule_on_random_measures() {
    let mut rng = common::rng(11);
    let grid = GridSpec::adaptive(GridSpec::panels_for_points(1 << 14), 1e-9);
    for _ in 0..10 {
        let len = rng.gen_range(1..=50);
        let seq = common::random_sequence(&mut rng, len, 0.9);
        let z = z_integral(bernstein_szego_log_density(&seq), 0, &grid).unwrap();
        let exact = szego_identity_m0(&seq);
        assert!((z.value - exact).abs() <= 1e-6, "N = {len}: {} vs {exact}", z.value);
        assert!(z.is_converged());
    }
}

#[test]
fn higher_order_integrals_match_coefficient_oracle() {
    let mut rng = common::rng(12);
    let grid = GridSpec::adaptive(128, 1e-10);
    for m in 1..=3 {
        for _ in 0..4 {
            let len = rng.gen_range(1..=30);
            let seq = common::random_sequence(&mut rng, len, 0.9);
            let z = z_integral(bernstein_szego_log_density(&seq), m, &grid).unwrap();
            let exact = common::exact_z(seq.coeffs(), m as usize);
            assert!((z.value - exact).abs() <= 1e-7, "m = {m}: {} vs {exact}", z.value);
        }
    }
}

#[test]
fn positive_part_is_bounded_by_total_weight() {
    let mut rng = common::rng(13);
    let grid = GridSpec::adaptive(64, 1e-9);
    for m in 0..=3u32 {
        for _ in 0..5 {
            let len = rng.gen_range(1..=40);
            let seq = common::random_sequence(&mut rng, len, 0.95);
            let z = z_integral(bernstein_szego_log_density(&seq), m, &grid).unwrap();
            assert!(z.positive_part <= 2f64.powi(m as i32), "m = {m}: {}", z.positive_part);
            assert!(z.negative_part >= 0.0);
        }
    }
}

#[test]
fn truncations_share_one_pass() {
    let seq = VerblunskySequence::power_sequence(0.6, 0.7, 400).unwrap();
    let n_list = [50, 200, 400];
    let estimates = z_truncations(&seq, 1, &n_list, &GridSpec::fixed(64)).unwrap();
    for (z, &n) in estimates.iter().zip(&n_list) {
        let exact = common::exact_z(&seq.coeffs()[..n], 1);
        assert!((z.value - exact).abs() <= 1e-6, "N = {n}: {} vs {exact}", z.value);
    }
    assert!(z_truncations(&seq, 1, &[200, 50], &GridSpec::default()).is_err());
    assert!(z_truncations(&seq, 1, &[], &GridSpec::default()).is_err());
}

#[test]
fn integrand_stays_bounded_toward_the_critical_point() {
    let m = 1;
    let seq = VerblunskySequence::test_sequence(m, 100_000).unwrap();
    let density = bernstein_szego_log_density(&seq);
    let mut density = density;
    let thetas: Vec<f64> = (0..=20).map(|i| 10f64.powf(-1.0 - 2.0 * i as f64 / 20.0)).collect();
    let values: Vec<f64> = thetas
        .iter()
        .map(|&t| (1.0 - t.cos()).powi(m as i32) * density(t).unwrap())
        .collect();
    let bound = 10.0 * values[0].abs();
    for (t, v) in thetas.iter().zip(&values) {
        assert!(v.abs() <= bound, "theta = {t}: {v} > {bound}");
    }
}

#[test]
fn approximant_leading_order() {
    for (m, d) in [(0u32, vec![]), (1, vec![]), (2, vec![0.75]), (3, vec![0.5, 1.0])] {
        let f = SumRuleApproximant::with_corrections(m, d.clone()).unwrap();
        assert_eq!(f.eval(Complex64::new(0.0, 0.0)).unwrap(), 0.0);
        let (l, c) = f.leading_term();
        assert!(c < 0.0 || l <= m as usize);
        let mut previous = f64::INFINITY;
        for r in [1e-1, 1e-2, 1e-3] {
            let alpha = Complex64::from_polar(r, 0.4);
            let ratio = f.eval(alpha).unwrap() / (c * r.powi(2 * l as i32));
            let gap = (ratio - 1.0).abs();
            assert!(gap < previous, "m = {m}, r = {r}: {ratio}");
            assert!(gap <= 10.0 * r * r, "m = {m}, r = {r}: {ratio}");
            previous = gap;
        }
        assert!(f.coefficient(m as usize + 1) < 0.0);
    }
    let f = SumRuleApproximant::new(2);
    for r in [0.2, 0.7] {
        let alpha = Complex64::new(0.0, r);
        let log_rho = 0.5 * (-r * r).ln_1p();
        assert_eq!(f.eval(alpha).unwrap(), f.b0 * log_rho);
    }
}

#[test]
fn exponent_fit_examples() {
    let grid: Vec<f64> = (0..=20).map(|i| 10f64.powf(-1.0 - i as f64 / 20.0)).collect();

    let seq = VerblunskySequence::test_sequence(1, 100_000).unwrap();
    let fit = exponent_fit(&seq, &grid).unwrap();
    assert!(fit.slope <= 2.3, "{}", fit.slope);
    assert!(fit.excluded.is_empty());

    let seq = VerblunskySequence::power_sequence(1.0, 0.5, 100_000).unwrap();
    let fit = exponent_fit(&seq, &grid).unwrap();
    assert!(fit.slope <= 1.3, "{}", fit.slope);

    // an exact power law is recovered
    let samples: Vec<(f64, f64)> = grid.iter().map(|&t| (t, -3.0 * t.powf(-1.5))).collect();
    let fit = fit_growth_exponent(&samples).unwrap();
    assert!((fit.slope - 1.5).abs() < 1e-12 && (fit.intercept - 3f64.ln()).abs() < 1e-12);
    assert!(fit.residual < 1e-12);
}

#[test]
fn zeroth_order_equivalence_trends() {
    // a coarse fixed grid resolves these densities to about 1e-2, ample for the trend rules
    let grid = GridSpec::fixed(32);
    let n_list = [100, 1_000, 10_000];
    let bounded = equivalence_experiment(0, &[1.0], 0.7, &n_list, &grid).unwrap();
    assert!(bounded.iter().all(|r| r.classification == TrendClass::Bounded));
    let diverging = equivalence_experiment(0, &[0.4], 0.7, &n_list, &grid).unwrap();
    assert!(diverging.iter().all(|r| r.classification == TrendClass::Diverging));
    for row in bounded.iter().chain(&diverging) {
        let seq = VerblunskySequence::power_sequence(row.beta, 0.7, row.n).unwrap();
        let exact = szego_identity_m0(&seq);
        assert!((row.z.value - exact).abs() <= 1e-2, "{} vs {exact}", row.z.value);
        let l2: f64 = seq.coeffs().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!((row.lp_partial_norm - l2).abs() <= 1e-12 * l2);
    }
    assert!(equivalence_experiment(0, &[], 0.7, &n_list, &grid).is_err());
    assert!((critical_beta(1) - 0.25).abs() < 1e-15);
}

#[test]
fn log_density_sampler_is_even_in_theta_for_real_coefficients() {
    let seq = VerblunskySequence::test_sequence(2, 500).unwrap();
    let mut sampler = bernstein_szego_log_density(&seq);
    let direct = BernsteinSzego::new(&seq);
    for t in [0.01, 0.3, 2.0, PI] {
        let a = sampler(t).unwrap();
        let b = sampler(-t).unwrap();
        assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        assert!((a - direct.log_density(t)).abs() <= 1e-9 * a.abs().max(1.0));
    }
}
