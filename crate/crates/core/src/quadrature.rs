//! Graded Gauss–Kronrod quadrature on the circle.
//!
//! Integrands live on `θ ∈ (−π, π]` and may be singular only at `θ = 0`.
//! The circle is cut into uniform panels, the two panels touching `0` are
//! refined dyadically down to a cutoff `θ_min`, and the innermost panel
//! `[0, θ_min]` is integrated with the open 15-point Kronrod rule, so no node
//! ever sits on `θ = 0`. Panels may additionally be bisected adaptively
//! (largest error first) until the summed Gauss–Kronrod error estimate drops
//! below a tolerance.
//!
//! Results are summed in left-to-right panel order, so a given [`GridSpec`]
//! reproduces bit for bit.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};

/// Kronrod abscissae on `[−1, 1]`, positive half, outermost first.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// 7-point Gauss weights for the odd-indexed entries of [`XGK`].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Nodes per panel.
pub const NODES_PER_PANEL: usize = 15;

/// Grid and refinement parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Finest cutoff; the innermost panels are `[−θ_min, 0]` and `[0, θ_min]`.
    pub theta_min: f64,
    /// Number of cutoffs in the refinement sequence `θ_min·4^{levels−1} … θ_min`.
    pub refine_levels: usize,
    /// Uniform panels on `(0, π]` (mirrored on `(−π, 0]`) before grading.
    pub panels: usize,
    /// Absolute error target for adaptive bisection; `INFINITY` keeps the grid fixed.
    pub tol: f64,
    /// Cap on adaptive bisections per panel set.
    pub max_subdivisions: usize,
    /// Cauchy tolerance on successive cutoff refinements.
    pub cauchy_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            theta_min: PI * 2f64.powi(-14),
            refine_levels: 3,
            panels: 64,
            tol: f64::INFINITY,
            max_subdivisions: 0,
            cauchy_tol: 1e-6,
        }
    }
}

impl GridSpec {
    /// A fixed (non-adaptive) grid with `panels` uniform panels per half circle.
    pub fn fixed(panels: usize) -> Self {
        Self {
            panels,
            ..Self::default()
        }
    }

    /// An adaptive grid refined until the error estimate is below `tol`.
    pub fn adaptive(panels: usize, tol: f64) -> Self {
        Self {
            panels,
            tol,
            max_subdivisions: 20_000,
            ..Self::default()
        }
    }

    /// Uniform panel count that gives at least `points` nodes before grading.
    pub fn panels_for_points(points: usize) -> usize {
        points.div_ceil(2 * NODES_PER_PANEL).max(1)
    }

    /// Checks every field.
    pub fn validate(&self) -> Result<()> {
        if self.panels == 0 {
            return Err(Error::invalid("panels", "must be >= 1"));
        }
        if self.refine_levels < 2 {
            return Err(Error::invalid("refine_levels", "the Cauchy test needs at least 2 levels"));
        }
        if !(self.theta_min > 0.0) {
            return Err(Error::invalid("theta_min", "must be positive"));
        }
        if !(self.coarsest_cutoff() < PI / self.panels as f64) {
            return Err(Error::invalid(
                "theta_min",
                "theta_min * 4^(refine_levels - 1) must be below pi / panels",
            ));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid("tol", "must be positive (INFINITY for a fixed grid)"));
        }
        if !(self.cauchy_tol > 0.0) {
            return Err(Error::invalid("cauchy_tol", "must be positive"));
        }
        Ok(())
    }

    fn coarsest_cutoff(&self) -> f64 {
        let shift = 2 * (self.refine_levels.saturating_sub(1)).min(500) as i32;
        self.theta_min * 2f64.powi(shift)
    }

    /// Cutoffs from coarsest to finest.
    pub fn cutoffs(&self) -> Vec<f64> {
        let coarsest = self.coarsest_cutoff();
        (0..self.refine_levels)
            .map(|k| coarsest / 4f64.powi(k as i32))
            .collect()
    }

    /// Panels on `(0, π]` outside `[0, θ_coarsest]`, graded dyadically toward it.
    pub(crate) fn outer_panels(&self) -> Vec<(f64, f64)> {
        let width = PI / self.panels as f64;
        let mut panels = Vec::new();
        let mut lo = self.coarsest_cutoff();
        while 2.0 * lo < width {
            panels.push((lo, 2.0 * lo));
            lo *= 2.0;
        }
        panels.push((lo, width));
        panels.extend((1..self.panels).map(|j| (j as f64 * width, (j + 1) as f64 * width)));
        panels
    }

    /// Panels on `[0, θ_coarsest]` for the cutoff `cutoff`.
    pub(crate) fn inner_panels(&self, cutoff: f64) -> Vec<(f64, f64)> {
        let coarsest = self.coarsest_cutoff();
        let mut panels = vec![(0.0, cutoff)];
        let mut lo = cutoff;
        while lo < coarsest * (1.0 - 1e-12) {
            panels.push((lo, 2.0 * lo));
            lo *= 2.0;
        }
        panels
    }
}

/// Mirrors panels on `(0, π]` onto `(−π, 0]` and orders everything left to right.
pub(crate) fn symmetric(panels: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut all: Vec<(f64, f64)> = panels.iter().map(|&(a, b)| (-b, -a)).collect();
    all.extend_from_slice(panels);
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    all
}

/// Vector-valued integral over a panel set.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelSum {
    /// One integral per channel.
    pub values: Vec<f64>,
    /// Summed `|K15 − G7|` error estimate (maximum over channels, per panel).
    pub error: f64,
    /// Integrand evaluations.
    pub evaluations: usize,
    /// Panels after adaptive bisection.
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    kronrod: Vec<f64>,
    error: f64,
    order: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first, earliest-created first among ties
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.order.cmp(&self.order))
    }
}

fn kronrod_panel<F>(f: &mut F, a: f64, b: f64, channels: usize, buf: &mut [f64]) -> Result<(Vec<f64>, f64)>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = vec![0.0; channels];
    let mut gauss = vec![0.0; channels];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let nodes: &[f64] = if x == 0.0 { &[center] } else { &[center - half * x, center + half * x] };
        for &t in nodes {
            f(t, buf)?;
            for c in 0..channels {
                let v = buf[c];
                if !v.is_finite() {
                    return Err(Error::NonFiniteSample { theta: t });
                }
                kronrod[c] += wk * v;
                if j % 2 == 1 {
                    gauss[c] += WG[j / 2] * v;
                }
            }
        }
    }
    let mut error: f64 = 0.0;
    for c in 0..channels {
        kronrod[c] *= half;
        gauss[c] *= half;
        error = error.max((kronrod[c] - gauss[c]).abs());
    }
    Ok((kronrod, error))
}

/// Integrates a vector-valued `f` over `panels`, bisecting the panel with the
/// largest error estimate until the total estimate is `≤ tol` or
/// `max_subdivisions` bisections have been made.
pub fn integrate_panels<F>(
    f: &mut F,
    channels: usize,
    panels: &[(f64, f64)],
    tol: f64,
    max_subdivisions: usize,
) -> Result<PanelSum>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let mut buf = vec![0.0; channels];
    let mut heap = BinaryHeap::with_capacity(panels.len());
    let mut order = 0;
    let mut total_error = 0.0;
    let mut evaluations = 0;
    for &(a, b) in panels {
        let (kronrod, error) = kronrod_panel(f, a, b, channels, &mut buf)?;
        evaluations += NODES_PER_PANEL;
        total_error += error;
        heap.push(Panel { a, b, kronrod, error, order });
        order += 1;
    }
    let mut subdivisions = 0;
    while total_error > tol && subdivisions < max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // panel too narrow to split
            heap.push(Panel { error: 0.0, ..worst });
            total_error = heap.iter().map(|p| p.error).sum();
            continue;
        }
        total_error -= worst.error;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (kronrod, error) = kronrod_panel(f, a, b, channels, &mut buf)?;
            evaluations += NODES_PER_PANEL;
            total_error += error;
            heap.push(Panel { a, b, kronrod, error, order });
            order += 1;
        }
        subdivisions += 1;
    }
    let mut finished = heap.into_vec();
    finished.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut values = vec![0.0; channels];
    let mut error = 0.0;
    for p in &finished {
        for (v, k) in values.iter_mut().zip(&p.kronrod) {
            *v += k;
        }
        error += p.error;
    }
    Ok(PanelSum {
        values,
        error,
        evaluations,
        panels: finished.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scalar<G: Fn(f64) -> f64>(g: G) -> impl FnMut(f64, &mut [f64]) -> Result<()> {
        move |t, out: &mut [f64]| {
            out[0] = g(t);
            Ok(())
        }
    }

    #[test]
    fn rule_is_exact_for_low_degree_polynomials() {
        let weights: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert_relative_eq!(weights, 2.0, epsilon = 1e-15);
        let gauss: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert_relative_eq!(gauss, 2.0, epsilon = 1e-15);
        for p in 0..=21 {
            let mut f = scalar(move |t: f64| t.powi(p));
            let s = integrate_panels(&mut f, 1, &[(0.0, 1.0)], f64::INFINITY, 0).unwrap();
            assert_relative_eq!(s.values[0], 1.0 / (p as f64 + 1.0), max_relative = 1e-13);
        }
    }

    #[test]
    fn adaptive_bisection_handles_log_singularity() {
        // ∫_0^1 ln|t − 1/3| dt = (2/3)ln(2/3) + (1/3)ln(1/3) − 1
        let exact = (2.0 / 3.0) * (2.0f64 / 3.0).ln() + (1.0 / 3.0) * (1.0f64 / 3.0).ln() - 1.0;
        let mut f = scalar(|t: f64| (t - 1.0 / 3.0).abs().ln());
        let fixed = integrate_panels(&mut f, 1, &[(0.0, 0.5), (0.5, 1.0)], f64::INFINITY, 0).unwrap();
        let adaptive = integrate_panels(&mut f, 1, &[(0.0, 0.5), (0.5, 1.0)], 1e-11, 10_000).unwrap();
        assert!((fixed.values[0] - exact).abs() > 1e-6);
        assert!((adaptive.values[0] - exact).abs() < 1e-10, "{}", adaptive.values[0] - exact);
        assert!(adaptive.error <= 1e-11);
    }

    #[test]
    fn non_finite_samples_are_reported() {
        let mut f = scalar(|t: f64| if t > 0.5 { f64::NAN } else { t });
        assert!(matches!(
            integrate_panels(&mut f, 1, &[(0.0, 1.0)], f64::INFINITY, 0),
            Err(Error::NonFiniteSample { .. })
        ));
    }

    #[test]
    fn grid_layout() {
        let spec = GridSpec::default();
        spec.validate().unwrap();
        let cutoffs = spec.cutoffs();
        assert_eq!(cutoffs.len(), 3);
        assert_relative_eq!(cutoffs[0], PI * 2f64.powi(-10));
        assert_relative_eq!(cutoffs[2], PI * 2f64.powi(-14));

        let outer = spec.outer_panels();
        assert_relative_eq!(outer[0].0, cutoffs[0]);
        assert_relative_eq!(outer.last().unwrap().1, PI, max_relative = 1e-15);
        for w in outer.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        let inner = spec.inner_panels(cutoffs[2]);
        assert_eq!(inner[0], (0.0, cutoffs[2]));
        assert_relative_eq!(inner.last().unwrap().1, cutoffs[0], max_relative = 1e-15);
        assert_eq!(inner.len(), 5);
        assert_eq!(spec.inner_panels(cutoffs[0]).len(), 1);

        let both = symmetric(&outer);
        assert_eq!(both.len(), 2 * outer.len());
        assert!(both.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec { panels: 0, ..GridSpec::default() }.validate().is_err());
        assert!(GridSpec { refine_levels: 1, ..GridSpec::default() }.validate().is_err());
        assert!(GridSpec { theta_min: 0.5, ..GridSpec::default() }.validate().is_err());
        assert!(GridSpec { tol: 0.0, ..GridSpec::default() }.validate().is_err());
        assert_eq!(GridSpec::panels_for_points(16_384), 547);
    }
}
