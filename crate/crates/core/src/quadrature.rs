//! One-dimensional quadrature: adaptive Gauss–Kronrod for smooth integrands
//! and sampled-data rules for signals on uniform grids.

#![allow(clippy::excessive_precision)]

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
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
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 200,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            ..Default::default()
        }
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let value = res_k * half;
    let res_abs = res_abs * h;
    let res_asc = res_asc * h;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel {
        a,
        b,
        value,
        error,
        abs: res_abs,
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Stops once the summed error estimate is below
/// `max(abs_tol, rel_tol * |I|)`. An empty or reversed interval integrates to
/// zero.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate> {
    if !(b > a) {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut panels = vec![kronrod15(&mut f, a, b)];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let abs: f64 = panels.iter().map(|p| p.abs).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * value.abs());
        // Below this the error estimate is dominated by rounding.
        let floor = 50.0 * f64::EPSILON * abs;
        if error <= tol || error <= floor {
            return Ok(Estimate { value, error });
        }
        if panels.len() >= opts.max_subdivisions {
            return Err(Error::QuadratureNotConverged {
                requested: tol,
                achieved: error,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::QuadratureNotConverged {
                requested: tol,
                achieved: error,
            });
        }
        panels.push(kronrod15(&mut f, p.a, mid));
        panels.push(kronrod15(&mut f, mid, p.b));
    }
}

/// Composite trapezoid weights for `n` uniform samples with spacing `dt`.
pub fn trapezoid_weights(n: usize, dt: f64) -> Vec<f64> {
    let mut w = vec![dt; n];
    if n > 0 {
        w[0] = 0.5 * dt;
        w[n - 1] = 0.5 * dt;
    }
    if n == 1 {
        w[0] = 0.0;
    }
    w
}

// Gregory end-correction coefficients, applied to forward differences of
// order 1..=6 at each end.
const GREGORY: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 24.0,
    19.0 / 720.0,
    -3.0 / 160.0,
    863.0 / 60480.0,
    -275.0 / 24192.0,
];

/// Trapezoid weights with Gregory endpoint corrections (differences up to
/// sixth order at each end).
///
/// Integrates polynomials of degree <= 6 exactly and keeps the trapezoid
/// rule's spectral accuracy in the interior. Falls back to plain trapezoid
/// weights when there are too few samples for non-overlapping corrections.
pub fn gregory_weights(n: usize, dt: f64) -> Vec<f64> {
    let order = GREGORY.len();
    if n < 2 * (order + 1) {
        return trapezoid_weights(n, dt);
    }
    let mut w = vec![1.0; n];
    w[0] = 0.5;
    w[n - 1] = 0.5;
    for (k, &c) in GREGORY.iter().enumerate() {
        let k = k + 1;
        let mut binom = 1.0;
        for j in 0..=k {
            let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
            w[j] += c * sign * binom;
            w[n - 1 - j] += c * sign * binom;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    w.iter_mut().for_each(|v| *v *= dt);
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn integrates_smooth_functions() {
        let opts = QuadOptions::with_rel_tol(1e-12);
        let est = integrate(|x| x.sin(), 0.0, PI, &opts).unwrap();
        assert!((est.value - 2.0).abs() < 1e-13);
        let est = integrate(|x| (-x * x).exp(), -8.0, 8.0, &opts).unwrap();
        assert!((est.value - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn resolves_kinks_adaptively() {
        let opts = QuadOptions::with_rel_tol(1e-10);
        let est = integrate(|x| (x - 0.3).abs(), 0.0, 1.0, &opts).unwrap();
        assert!((est.value - (0.045 + 0.245)).abs() < 1e-10);
    }

    #[test]
    fn empty_interval_is_zero() {
        let est = integrate(|_| 1.0, 1.0, 1.0, &QuadOptions::default()).unwrap();
        assert_eq!(est.value, 0.0);
        let est = integrate(|_| 1.0, 2.0, 1.0, &QuadOptions::default()).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = QuadOptions {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_subdivisions: 4,
        };
        let err = integrate(|x| if x < 0.123_456 { 0.0 } else { 1.0 }, 0.0, 1.0, &opts).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }

    #[test]
    fn gregory_is_exact_for_sextics() {
        let n = 40;
        let dt = 1.0 / (n - 1) as f64;
        let w = gregory_weights(n, dt);
        for deg in 0..=6 {
            let sum: f64 = (0..n).map(|i| w[i] * (i as f64 * dt).powi(deg)).sum();
            assert!((sum - 1.0 / (deg + 1) as f64).abs() < 1e-13, "degree {deg}");
        }
    }

    #[test]
    fn gregory_beats_trapezoid_on_nonperiodic_data() {
        let n = 257;
        let dt = 2.0 / (n - 1) as f64;
        let exact = (2.0f64).exp() - 1.0;
        let samples: Vec<f64> = (0..n).map(|i| (i as f64 * dt).exp()).collect();
        let trap: f64 = trapezoid_weights(n, dt).iter().zip(&samples).map(|(w, f)| w * f).sum();
        let greg: f64 = gregory_weights(n, dt).iter().zip(&samples).map(|(w, f)| w * f).sum();
        assert!((greg - exact).abs() < 1e-13);
        assert!((trap - exact).abs() > 1e-6);
    }

    #[test]
    fn short_grids_fall_back_to_trapezoid() {
        assert_eq!(gregory_weights(5, 0.1), trapezoid_weights(5, 0.1));
    }
}
