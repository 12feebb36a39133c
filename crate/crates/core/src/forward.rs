//! Background field `V` of a compactly supported source through the retarded
//! potential
//!
//! ```text
//! V(x, t) = 1/(4π) ∫ J(y, t - |x - y|/c0) / |x - y| dy,
//! ```
//!
//! the solution of `c0⁻² V_tt - ΔV = J` with `V = 0` before the source
//! switches on. In spherical coordinates about `x` this is
//! `1/(4π) ∫ r M(r, t - r/c0) dr` with `M` the integral of `J` over the unit
//! sphere of directions, so a source with a closed-form sphere integral needs
//! only a one-dimensional radial quadrature.

use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{add, distance, orthonormal_frame, scale, sub, Vec3};
use crate::medium::MediumConfig;
use crate::quadrature::{integrate, QuadOptions};
use crate::series::TimeSeries;
use crate::source::SourceModel;

/// Default quadrature settings for the retarded potential.
pub fn default_options() -> QuadOptions {
    QuadOptions {
        rel_tol: 1e-8,
        abs_tol: 1e-300,
        max_subdivisions: 400,
    }
}

/// `V(x, t)`; exactly zero outside the causal shell.
pub fn eval_v<S: SourceModel + ?Sized>(src: &S, cfg: &MediumConfig, x: Vec3, t: f64, opts: &QuadOptions) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::invalid("t", "must be finite"));
    }
    let c0 = cfg.c0();
    let ball = src.spatial_support();
    let (t_start, t_end) = src.time_support();
    let l = distance(x, ball.center);
    let lo = (l - ball.radius).max(0.0).max(c0 * (t - t_end));
    let hi = (l + ball.radius).min(c0 * (t - t_start));
    if !(hi > lo) {
        return Ok(0.0);
    }

    let failure: Cell<Option<Error>> = Cell::new(None);
    let mut shell = |r: f64| -> f64 {
        let tr = t - r / c0;
        let m = match src.sphere_integral(x, r, tr) {
            Some(m) => m,
            None => match sphere_quadrature(src, x, l, r, tr, opts) {
                Ok(m) => m,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            },
        };
        r * m
    };

    let mut cuts: Vec<f64> = src
        .radial_breakpoints(x, t, c0)
        .into_iter()
        .filter(|&r| r > lo && r < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.push(hi);
    let mut total = 0.0;
    let mut a = lo;
    for b in cuts {
        if b > a {
            total += integrate(&mut shell, a, b, opts)?.value;
            a = b;
        }
    }
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(total / (4.0 * PI))
}

// ∫_{S²} J(x + rω, t) dω for a general source, with the pole along the
// direction to the support center so the support is a polar cap.
fn sphere_quadrature<S: SourceModel + ?Sized>(
    src: &S,
    x: Vec3,
    l: f64,
    r: f64,
    t: f64,
    opts: &QuadOptions,
) -> Result<f64> {
    let ball = src.spatial_support();
    let (t_start, t_end) = src.time_support();
    if t < t_start || t > t_end {
        return Ok(0.0);
    }
    let axis = if l > 0.0 {
        scale(1.0 / l, sub(ball.center, x))
    } else {
        [0.0, 0.0, 1.0]
    };
    let (e1, e2) = orthonormal_frame(axis);
    let u_lo = if r * l > 0.0 {
        ((r * r + l * l - ball.radius * ball.radius) / (2.0 * r * l)).clamp(-1.0, 1.0)
    } else {
        -1.0
    };
    let failure: Cell<Option<Error>> = Cell::new(None);
    let ring = |u: f64| -> f64 {
        let w = (1.0 - u * u).max(0.0).sqrt();
        let res = integrate(
            |phi| {
                let dir = add(scale(u, axis), add(scale(w * phi.cos(), e1), scale(w * phi.sin(), e2)));
                src.eval(add(x, scale(r, dir)), t)
            },
            0.0,
            2.0 * PI,
            opts,
        );
        match res {
            Ok(est) => est.value,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let value = integrate(ring, u_lo, 1.0, opts)?.value;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Samples `V(x, t0 + k·dt)` for `k = 0..n`.
pub fn trace_v<S: SourceModel + ?Sized>(
    src: &S,
    cfg: &MediumConfig,
    x: Vec3,
    t0: f64,
    dt: f64,
    n: usize,
    opts: &QuadOptions,
) -> Result<TimeSeries> {
    if n < 2 {
        return Err(Error::invalid("n", "a trace needs at least 2 samples"));
    }
    let values = (0..n)
        .map(|k| eval_v(src, cfg, x, sample_time(t0, dt, k), opts))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(t0, dt, values)
}

/// Sample instant shared by [`trace_v`] and [`TimeSeries::time`].
#[inline]
pub fn sample_time(t0: f64, dt: f64, k: usize) -> f64 {
    t0 + k as f64 * dt
}

/// Upper envelope of the time after which `V(x, ·)` vanishes:
/// `t_end + (|x - center| + radius)/c0`.
pub fn support_end<S: SourceModel + ?Sized>(src: &S, cfg: &MediumConfig, x: Vec3) -> f64 {
    let ball = src.spatial_support();
    src.time_support().1 + ball.max_distance(x) / cfg.c0()
}

/// Earliest time at which `V(x, ·)` can be nonzero.
pub fn arrival_time<S: SourceModel + ?Sized>(src: &S, cfg: &MediumConfig, x: Vec3) -> f64 {
    let ball = src.spatial_support();
    src.time_support().0 + ball.min_distance(x) / cfg.c0()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;
    use crate::source::{BumpSource, FnSource};

    fn medium(c0: f64) -> MediumConfig {
        MediumConfig::with_scale(c0, 0.01, 1.0, [0.0; 3]).unwrap()
    }

    fn bump() -> BumpSource {
        BumpSource::standard([0.0; 3], 0.5, 2.0).unwrap()
    }

    #[test]
    fn zero_source_gives_zero_field() {
        let zero = FnSource::new(|_, _| 0.0, Ball::new([0.0; 3], 0.5), (0.0, 1.0)).unwrap();
        let opts = default_options();
        for t in [0.1, 0.5, 1.0, 2.0] {
            assert_eq!(eval_v(&zero, &medium(1.0), [0.2, 0.0, 0.0], t, &opts).unwrap(), 0.0);
        }
        let tr = trace_v(&zero, &medium(1.0), [1.0; 3], 0.0, 0.1, 2, &opts).unwrap();
        assert_eq!(tr.values(), &[0.0, 0.0]);
    }

    #[test]
    fn causal_before_arrival() {
        let x = [2.0, 0.0, 0.0];
        let cfg = medium(1.0);
        let first = arrival_time(&bump(), &cfg, x);
        assert_eq!(first, 1.5);
        let opts = default_options();
        assert_eq!(eval_v(&bump(), &cfg, x, first - 1e-9, &opts).unwrap(), 0.0);
        assert!(eval_v(&bump(), &cfg, x, first + 0.5, &opts).unwrap() > 0.0);
    }

    #[test]
    fn support_end_formula() {
        let src = BumpSource::standard([0.0; 3], 1.0, 1.0).unwrap();
        assert_eq!(support_end(&src, &medium(1.0), [0.0; 3]), 2.0);
        let far = [3.0, 0.0, 0.0];
        let t1 = support_end(&src, &medium(1.0), far) - 1.0;
        let t2 = support_end(&src, &medium(2.0), far) - 1.0;
        assert_eq!(t1, 2.0 * t2);
    }

    #[test]
    fn vanishes_after_support_end() {
        let cfg = medium(2.0);
        let x = [0.2, 0.1, 0.0];
        let opts = default_options();
        let end = support_end(&bump(), &cfg, x);
        let peak = (0..200)
            .map(|k| eval_v(&bump(), &cfg, x, k as f64 * end / 200.0, &opts).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(peak > 0.0);
        for k in 0..50 {
            let t = end + k as f64 * 0.05;
            assert!(eval_v(&bump(), &cfg, x, t, &opts).unwrap().abs() < 1e-12 * peak);
        }
    }

    #[test]
    fn trace_matches_pointwise_evaluation() {
        let cfg = medium(2.0);
        let x = [0.1, 0.0, 0.3];
        let opts = default_options();
        let tr = trace_v(&bump(), &cfg, x, 0.05, 0.07, 40, &opts).unwrap();
        for (k, &v) in tr.values().iter().enumerate() {
            assert_eq!(v, eval_v(&bump(), &cfg, x, tr.time(k), &opts).unwrap());
        }
    }

    #[test]
    fn closed_form_and_generic_paths_agree() {
        let b = bump();
        let generic = FnSource::new(move |y, t| b.eval(y, t), b.spatial_support(), b.time_support()).unwrap();
        let cfg = medium(2.0);
        let opts = QuadOptions::with_rel_tol(1e-9);
        for (x, t) in [([0.0; 3], 1.0), ([0.2, 0.1, -0.1], 1.3), ([1.0, 0.5, 0.0], 1.7)] {
            let fast = eval_v(&b, &cfg, x, t, &opts).unwrap();
            let slow = eval_v(&generic, &cfg, x, t, &opts).unwrap();
            assert!((fast - slow).abs() < 1e-7 * fast.abs(), "{fast} vs {slow}");
        }
    }

    #[test]
    fn static_limit_of_constant_ball() {
        // A long-lived uniform ball of charge: once the whole ball is visible
        // V(center) = ρ²/2 for unit density.
        let src = FnSource::new(|_, _| 1.0, Ball::new([0.0; 3], 1.0), (0.0, 10.0)).unwrap();
        let v = eval_v(&src, &medium(1.0), [0.0; 3], 5.0, &QuadOptions::with_rel_tol(1e-10)).unwrap();
        assert!((v - 0.5).abs() < 1e-9, "{v}");
    }
}
