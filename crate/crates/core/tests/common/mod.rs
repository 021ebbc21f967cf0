#![allow(dead_code)]

use num_complex::Complex64;
use opuc_core::sumrule::weight_poly_coeffs;
use opuc_core::VerblunskySequence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the disk of radius `radius`.
pub fn disk_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>())
}

pub fn random_sequence(rng: &mut impl Rng, len: usize, radius: f64) -> VerblunskySequence {
    VerblunskySequence::new((0..len).map(|_| disk_point(rng, radius)).collect()).unwrap()
}

/// `Z_m` of the Bernstein–Szegő measure of `alpha`, from the coefficient side.
///
/// On the circle `log w = Σ log(1 − |α_n|²) − 2·Re log Φ_N*(z)` with `Φ_N*`
/// the reversed monic polynomial, which has no zeros in the closed disk, so
/// `log Φ_N*(z) = Σ_k L_k z^k` converges there with `L_0 = 0`. Pairing with
/// `(1 − cos θ)^m = Σ b_k e^{−ikθ}` leaves
/// `Z_m = b_0 Σ log(1 − |α_n|²) − 2 Σ_{k=1}^m b_k Re L_k`.
/// Only the first `m + 1` Taylor coefficients of the monic pair are needed.
pub fn exact_z(alpha: &[Complex64], m: usize) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = vec![zero; m + 1];
    let mut s = vec![zero; m + 1];
    p[0] = Complex64::new(1.0, 0.0);
    s[0] = Complex64::new(1.0, 0.0);
    let mut log_sum = 0.0;
    for &a in alpha {
        let zp: Vec<Complex64> = (0..=m).map(|k| if k == 0 { zero } else { p[k - 1] }).collect();
        for k in 0..=m {
            let (pk, sk) = (zp[k] - a.conj() * s[k], s[k] - a * zp[k]);
            p[k] = pk;
            s[k] = sk;
        }
        log_sum += (-a.norm_sqr()).ln_1p();
    }
    let mut l = vec![zero; m + 1];
    for k in 1..=m {
        let mut acc = s[k] * k as f64;
        for j in 1..k {
            acc -= l[j] * s[k - j] * j as f64;
        }
        l[k] = acc / k as f64;
    }
    let b = weight_poly_coeffs(m as u32);
    b.b0() * log_sum - 2.0 * (1..=m).map(|k| b.get(k as i64) * l[k].re).sum::<f64>()
}
