//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite intervals.
//!
//! A 15-point Kronrod rule with embedded 7-point Gauss rule supplies the
//! per-segment value and error estimate; adaptivity bisects the segment with
//! the largest estimated error. The subdivision order is a fixed function of
//! the integrand, so results are bit-reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budgets for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Decay length used by the exponential change of variables that maps
    /// (0, inf) onto (0, 1).
    pub tail_decay_scale: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 60,
            tail_decay_scale: 1.0,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::validation("quadrature rel_tol must be > 0"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::validation("quadrature abs_tol must be > 0"));
        }
        if !(self.tail_decay_scale > 0.0) {
            return Err(Error::validation("tail_decay_scale must be > 0"));
        }
        Ok(())
    }

    pub fn with_tail_scale(mut self, scale: f64) -> Self {
        self.tail_decay_scale = scale.clamp(1e-3, 1e3);
        self
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Combine independent contributions (sums values and error budgets).
    pub fn accumulate(&self, other: &QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(&self, c: f64) -> QuadratureResult {
        QuadratureResult {
            value: c * self.value,
            error_estimate: c.abs() * self.error_estimate,
            ..*self
        }
    }
}

// 15-point Kronrod abscissae (positive half, descending) and weights, with
// the embedded 7-point Gauss weights on the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_96,
    0.063_092_092_629_978_553_29,
    0.104_790_010_322_250_183_84,
    0.140_653_259_715_525_918_75,
    0.169_004_726_639_267_902_83,
    0.190_350_578_064_785_409_91,
    0.204_432_940_075_298_892_41,
    0.209_482_141_084_727_828_01,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_27,
    0.279_705_391_489_276_667_90,
    0.381_830_050_505_118_944_95,
    0.417_959_183_673_469_387_76,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One G7K15 application on [a, b]. Endpoints are never evaluated.
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];

    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFiniteIntegrand { abscissa: x })
        }
    };

    let fc = eval(center)?;
    let mut res_kronrod = WGK[7] * fc;
    let mut res_gauss = WG[3] * fc;
    let mut res_abs = res_kronrod.abs();

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        res_kronrod += WGK[j] * fsum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * fsum;
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs, res_asc);
    Ok((value, err))
}

struct Segment {
    value: f64,
    error: f64,
    a: f64,
    b: f64,
    seq: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Largest error first; older segment wins ties for determinism.
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then(other.seq.cmp(&self.seq))
    }
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    segments: &[(f64, f64)],
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    settings.validate()?;
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    let mut seq = 0usize;

    for &(a, b) in segments {
        if !(a < b) {
            continue;
        }
        let (value, error) = qk15(f, a, b)?;
        evaluations += 15;
        heap.push(Segment {
            value,
            error,
            a,
            b,
            seq,
        });
        seq += 1;
    }
    if heap.is_empty() {
        return Ok(QuadratureResult::zero());
    }

    let mut total_value: f64 = heap.iter().map(|s| s.value).sum();
    let mut total_error: f64 = heap.iter().map(|s| s.error).sum();
    let mut splits = 0usize;

    while total_error > settings.abs_tol.max(settings.rel_tol * total_value.abs()) {
        if splits >= settings.max_subdivisions {
            return Ok(QuadratureResult {
                value: total_value,
                error_estimate: total_error,
                evaluations,
                converged: false,
            });
        }
        let worst = heap.pop().expect("heap cannot be empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; keep its estimate.
            heap.push(Segment {
                error: 0.0,
                ..worst
            });
            total_error = heap.iter().map(|s| s.error).sum();
            continue;
        }
        let (v1, e1) = qk15(f, worst.a, mid)?;
        let (v2, e2) = qk15(f, mid, worst.b)?;
        evaluations += 30;
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        heap.push(Segment {
            value: v1,
            error: e1,
            a: worst.a,
            b: mid,
            seq,
        });
        heap.push(Segment {
            value: v2,
            error: e2,
            a: mid,
            b: worst.b,
            seq: seq + 1,
        });
        seq += 2;
        splits += 1;
    }

    Ok(QuadratureResult {
        value: total_value,
        error_estimate: total_error,
        evaluations,
        converged: true,
    })
}

/// Integrate `f` over the finite interval (a, b).
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    if !(a < b) {
        return Err(Error::domain(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    adaptive(&f, &[(a, b)], settings)
}

/// Integrate `f` over (a, b), pre-splitting at the given interior points.
///
/// Used for integrands with known structure: oscillation half-periods and
/// zero-temperature Fermi edges.
pub fn integrate_finite_split<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    if !(a < b) {
        return Err(Error::domain(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    let segments = split_segments(a, b, breakpoints);
    adaptive(&f, &segments, settings)
}

fn split_segments(a: f64, b: f64, breakpoints: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut segments = Vec::with_capacity(cuts.len() + 1);
    let mut left = a;
    for c in cuts {
        segments.push((left, c));
        left = c;
    }
    segments.push((left, b));
    segments
}

/// Integrate `f` over (0, inf) for integrands that decay at least
/// exponentially, via the substitution k = -scale * ln(u).
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    let s = settings.tail_decay_scale;
    adaptive(&|u: f64| f(-s * u.ln()) * s / u, &[(0.0, 1.0)], settings)
}

/// Integrate `f` over (0, inf) with explicit splits on [0, max(breakpoints)]
/// followed by the exponentially mapped tail.
pub fn integrate_semi_infinite_split<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    let cut = breakpoints.iter().copied().fold(0.0f64, f64::max);
    if cut <= 0.0 {
        return integrate_semi_infinite(f, settings);
    }
    let head = integrate_finite_split(&f, 0.0, cut, breakpoints, settings)?;
    let s = settings.tail_decay_scale;
    let tail = adaptive(
        &|u: f64| f(cut - s * u.ln()) * s / u,
        &[(0.0, 1.0)],
        settings,
    )?;
    Ok(head.accumulate(&tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn settings() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn finite_polynomial() {
        let r = integrate_finite(|x| x, 0.0, 1.0, &settings()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn finite_oscillatory_has_analytic_value() {
        // int_0^1 cos(2 k x) dk at x = 5 equals sin(10)/10.
        let x = 5.0;
        let r = integrate_finite(|k| (2.0 * k * x).cos(), 0.0, 1.0, &settings()).unwrap();
        assert!((r.value - (10.0f64).sin() / 10.0).abs() < 1e-12);
        assert!((r.value - (-0.054_402_111_088_936_98)).abs() < 1e-12);
    }

    #[test]
    fn finite_log_singularity_kernel() {
        // int_0^1 dxi / (1 - ln xi) = e * E1(1) = 0.596347362323194.
        let r = integrate_finite(|x| 1.0 / (1.0 - x.ln()), 0.0, 1.0, &settings()).unwrap();
        assert!((r.value - 0.596_347_362_323_194_1).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite_exponential() {
        let r = integrate_semi_infinite(|k| (-k).exp(), &settings()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_gaussian_moment() {
        let r = integrate_semi_infinite(|k| k * (-k * k / 2.0).exp() / (2.0 * PI), &settings())
            .unwrap();
        assert!((r.value - 1.0 / (2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_matches_trapezoid_oracle() {
        // Brute-force trapezoid oracle on [0, 40].
        let f = |k: f64| k.powi(3) * (-k * k / 2.0).exp() / ((k * k + 1.0) * (k * k + 1.0));
        let n = 4_000_000usize;
        let h = 40.0 / n as f64;
        let mut oracle = 0.5 * (f(0.0) + f(40.0));
        for i in 1..n {
            oracle += f(i as f64 * h);
        }
        oracle *= h;
        let r = integrate_semi_infinite(f, &settings()).unwrap();
        assert!(
            (r.value - oracle).abs() < 1e-9,
            "adaptive {} vs trapezoid {}",
            r.value,
            oracle
        );
    }

    #[test]
    fn finite_and_semi_infinite_agree_on_compact_support() {
        let f = |k: f64| (k - 3.0).powi(2) * (-k).exp();
        let a = integrate_semi_infinite(f, &settings()).unwrap();
        let b = integrate_finite(f, 0.0, 40.0, &settings()).unwrap();
        assert!((a.value - b.value).abs() < 1e-9);
    }

    #[test]
    fn split_matches_plain() {
        let f = |k: f64| (2.0 * k).cos() * (-k).exp();
        let plain = integrate_semi_infinite(f, &settings()).unwrap();
        let bps: Vec<f64> = (1..40).map(|j| j as f64 * PI / 4.0).collect();
        let split = integrate_semi_infinite_split(f, &bps, &settings()).unwrap();
        assert!((plain.value - split.value).abs() < 1e-10);
        // Analytic: int_0^inf cos(2k) e^{-k} dk = 1/5.
        assert!((split.value - 0.2).abs() < 1e-12);
    }

    #[test]
    fn nan_integrand_reports_abscissa() {
        let err = integrate_finite(|x| (x - 0.5).ln(), 0.0, 1.0, &settings()).unwrap_err();
        match err {
            crate::error::Error::NonFiniteIntegrand { abscissa } => {
                assert!(abscissa <= 0.5);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_reports_not_converged() {
        let tight = QuadratureSettings {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            max_subdivisions: 2,
            tail_decay_scale: 1.0,
        };
        let r = integrate_finite(|x| (50.0 * x).sin().abs(), 0.0, 1.0, &tight).unwrap();
        assert!(!r.converged);
        assert!(r.error_estimate > 0.0);
    }

    #[test]
    fn deterministic_reruns_are_bit_identical() {
        let f = |k: f64| k.powi(3) / ((k * k + 0.3) * ((k * k / 2.0).exp() + 1.0));
        let a = integrate_semi_infinite(f, &settings()).unwrap();
        let b = integrate_semi_infinite(f, &settings()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
