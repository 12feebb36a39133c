//! Dominant-term model of the field scattered by the particle.
//!
//! For an observation point `x` at distance `d` from the particle center `z`,
//!
//! ```text
//! W(x, t) = Σ_n α_n ∫_0^{t - d/c0} sin(ω_n (t - d/c0 - σ)) V(z, σ) dσ,
//! ```
//!
//! with `α_n = ω_n (∫_D e_n)² / (4π d λ_n)`. Each time integral is a trapezoid
//! sum over the samples of `V(z, ·)`, linearly interpolated at the upper limit.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::forward::{support_end, trace_v};
use crate::geometry::{distance, Vec3};
use crate::medium::MediumConfig;
use crate::quadrature::QuadOptions;
use crate::series::TimeSeries;
use crate::source::SourceModel;
use crate::spectrum::{alpha_weight, EigenMode};

/// Default truncation order of the mode series.
pub const DEFAULT_MODES: usize = 64;

/// Samples of the measured field `U(x, ·)` on `[T̃, T̃ + 2π/b]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasurementWindow {
    pub x: Vec3,
    pub t_tilde: f64,
    /// Window length `2π/b`.
    pub length: f64,
    pub series: TimeSeries,
    /// Envelope of the modes left out of the synthesized data.
    pub tail_bound: f64,
}

impl MeasurementWindow {
    /// Wraps recorded samples, checking that they span `length` to within one
    /// sample.
    pub fn new(x: Vec3, t_tilde: f64, length: f64, series: TimeSeries) -> Result<Self> {
        if (series.t0() - t_tilde).abs() > 1e-9 * series.dt().max(t_tilde.abs() * 1e-6) {
            return Err(Error::GridMismatch(alloc::format!(
                "window series starts at {} but t_tilde is {}",
                series.t0(),
                t_tilde
            )));
        }
        let span = series.end() - series.t0();
        if (span - length).abs() > series.dt() {
            return Err(Error::GridMismatch(alloc::format!(
                "window series spans {span} but the window length is {length}"
            )));
        }
        Ok(MeasurementWindow {
            x,
            t_tilde,
            length,
            series,
            tail_bound: 0.0,
        })
    }

    /// Number of sample intervals.
    pub fn intervals(&self) -> usize {
        self.series.len() - 1
    }
}

/// Prefix trapezoid sums of `cos(ω σ) V(σ)` and `sin(ω σ) V(σ)` for a set of
/// modes, so that `W` can be evaluated at many instants in `O(N)` each.
#[derive(Debug, Clone)]
pub struct Convolution<'a> {
    vz: &'a TimeSeries,
    omegas: Vec<f64>,
    weights: Vec<f64>,
    prefix_cos: Vec<Vec<f64>>,
    prefix_sin: Vec<Vec<f64>>,
}

impl<'a> Convolution<'a> {
    /// `vz` samples `V(z, ·)` and must start at or before `σ = 0`; `V` is
    /// taken to vanish before its first sample.
    pub fn new(vz: &'a TimeSeries, omegas: &[f64], weights: &[f64]) -> Result<Self> {
        if omegas.len() != weights.len() {
            return Err(Error::invalid("weights", "need one weight per frequency"));
        }
        if vz.t0() > 1e-9 * vz.dt() {
            return Err(Error::CoverageGap {
                have_start: vz.t0(),
                have_end: vz.end(),
                need_start: 0.0,
                need_end: vz.end(),
            });
        }
        let n = vz.len();
        let half = 0.5 * vz.dt();
        let mut prefix_cos = Vec::with_capacity(omegas.len());
        let mut prefix_sin = Vec::with_capacity(omegas.len());
        for &w in omegas {
            let mut pc = vec![0.0; n];
            let mut ps = vec![0.0; n];
            let (mut c_prev, mut s_prev) = (0.0, 0.0);
            for (k, &v) in vz.values().iter().enumerate() {
                let (s, c) = (w * vz.time(k)).sin_cos();
                let (c_cur, s_cur) = (c * v, s * v);
                if k > 0 {
                    pc[k] = pc[k - 1] + half * (c_prev + c_cur);
                    ps[k] = ps[k - 1] + half * (s_prev + s_cur);
                }
                c_prev = c_cur;
                s_prev = s_cur;
            }
            prefix_cos.push(pc);
            prefix_sin.push(ps);
        }
        Ok(Convolution {
            vz,
            omegas: omegas.to_vec(),
            weights: weights.to_vec(),
            prefix_cos,
            prefix_sin,
        })
    }

    /// `(∫_0^τ cos(ω_n σ) V dσ, ∫_0^τ sin(ω_n σ) V dσ)` for mode `n` (0-based).
    pub fn moments(&self, n: usize, tau: f64) -> Result<(f64, f64)> {
        let vz = self.vz;
        if tau <= vz.t0() {
            return Ok((0.0, 0.0));
        }
        let s = (tau - vz.t0()) / vz.dt();
        let last = vz.len() - 1;
        if s > last as f64 + 1e-9 {
            return Err(Error::CoverageGap {
                have_start: vz.t0(),
                have_end: vz.end(),
                need_start: 0.0,
                need_end: tau,
            });
        }
        let k = (s.floor() as usize).min(last);
        let (mut c, mut sn) = (self.prefix_cos[n][k], self.prefix_sin[n][k]);
        let frac = s - k as f64;
        if frac > 0.0 && k < last {
            let w = self.omegas[n];
            let h = frac * vz.dt();
            let vk = vz.values()[k];
            let v_tau = vk + frac * (vz.values()[k + 1] - vk);
            let (s0, c0) = (w * vz.time(k)).sin_cos();
            let (s1, c1) = (w * tau).sin_cos();
            c += 0.5 * h * (c0 * vk + c1 * v_tau);
            sn += 0.5 * h * (s0 * vk + s1 * v_tau);
        }
        Ok((c, sn))
    }

    /// `Σ_n weight_n ∫_0^τ sin(ω_n (τ - σ)) V(σ) dσ`, summed in mode order.
    pub fn eval(&self, tau: f64) -> Result<f64> {
        let mut total = 0.0;
        for n in 0..self.omegas.len() {
            let (c, s) = self.moments(n, tau)?;
            let (sin_t, cos_t) = (self.omegas[n] * tau).sin_cos();
            total += self.weights[n] * (sin_t * c - cos_t * s);
        }
        Ok(total)
    }
}

fn truncated(modes: &[EigenMode], n: usize) -> Result<&[EigenMode]> {
    modes.get(..n).ok_or(Error::IndexOutOfRange {
        n,
        max: modes.len(),
    })
}

fn weights(modes: &[EigenMode], cfg: &MediumConfig, x: Vec3) -> Result<Vec<f64>> {
    modes.iter().map(|m| alpha_weight(m, x, cfg)).collect()
}

/// Dominant term `W(x, t)` truncated to the first `n` modes, from samples of
/// `V(z, ·)` starting at `σ = 0`.
pub fn eval_w_dominant(
    modes: &[EigenMode],
    cfg: &MediumConfig,
    x: Vec3,
    vz: &TimeSeries,
    t: f64,
    n: usize,
) -> Result<f64> {
    let modes = truncated(modes, n)?;
    let tau = t - distance(x, cfg.z()) / cfg.c0();
    if tau <= 0.0 {
        return Ok(0.0);
    }
    let omegas: Vec<f64> = modes.iter().map(|m| m.omega).collect();
    Convolution::new(vz, &omegas, &weights(modes, cfg, x)?)?.eval(tau)
}

/// `Σ_{n > N} α_n · ‖V(z, ·)‖₁` over the modes available beyond `n`.
pub fn series_tail_bound(modes: &[EigenMode], cfg: &MediumConfig, x: Vec3, vz_l1: f64, n: usize) -> Result<f64> {
    if vz_l1 == 0.0 || n >= modes.len() {
        return Ok(0.0);
    }
    let mut tail = 0.0;
    for m in &modes[n..] {
        tail += alpha_weight(m, x, cfg)?;
    }
    Ok(tail * vz_l1)
}

/// Window start `T_J + |x - z|/c0 + 0.1·(2π/b)`.
pub fn auto_t_tilde<S: SourceModel + ?Sized>(src: &S, cfg: &MediumConfig, x: Vec3) -> f64 {
    earliest_window(src, cfg, x) + 0.1 * cfg.window_length()
}

/// `T_J + |x - z|/c0`; windows must start strictly after it.
pub fn earliest_window<S: SourceModel + ?Sized>(src: &S, cfg: &MediumConfig, x: Vec3) -> f64 {
    support_end(src, cfg, cfg.z()) + distance(x, cfg.z()) / cfg.c0()
}

/// Where and how to record the measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub x: Vec3,
    pub t_tilde: f64,
    /// Requested sample spacing; rounded so the window holds a whole number
    /// of intervals.
    pub dt: f64,
    /// Series truncation order.
    pub n_modes: usize,
}

/// A synthesized window together with the internal field that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub window: MeasurementWindow,
    /// `V(z, ·)` from `σ = 0` on the window's sample spacing.
    pub vz: TimeSeries,
}

/// Synthesizes `U = V + W` at `obs.x` over `[T̃, T̃ + 2π/b]`.
pub fn simulate<S: SourceModel + ?Sized>(
    src: &S,
    cfg: &MediumConfig,
    modes: &[EigenMode],
    obs: &Observation,
    opts: &QuadOptions,
) -> Result<Simulation> {
    let all_modes = modes;
    let modes = truncated(all_modes, obs.n_modes)?;
    let d = distance(obs.x, cfg.z());
    if d == 0.0 {
        return Err(Error::ObservationAtCenter);
    }
    let bound = earliest_window(src, cfg, obs.x);
    if !(obs.t_tilde > bound) {
        return Err(Error::WindowTooEarly {
            t_tilde: obs.t_tilde,
            bound,
        });
    }
    let length = cfg.window_length();
    if !(obs.dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let intervals = ((length / obs.dt).round() as usize).max(1);
    let dt = length / intervals as f64;
    if let Some(last) = modes.last() {
        let max_dt = PI / (4.0 * last.omega);
        if dt >= max_dt {
            return Err(Error::UnderSampled { dt, max_dt });
        }
    }

    let window_end = obs.t_tilde + length;
    let vz_len = ((window_end - d / cfg.c0()) / dt).ceil() as usize + 1;
    let vz = trace_v(src, cfg, cfg.z(), 0.0, dt, vz_len.max(2), opts)?;

    let omegas: Vec<f64> = modes.iter().map(|m| m.omega).collect();
    let conv = Convolution::new(&vz, &omegas, &weights(modes, cfg, obs.x)?)?;
    let mut values = Vec::with_capacity(intervals + 1);
    for k in 0..=intervals {
        let t = obs.t_tilde + k as f64 * dt;
        values.push(conv.eval(t - d / cfg.c0())?);
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // V(x, ·) has left the detector by T̃; verify rather than assume.
    let floor = 1e-12 * scale.max(f64::MIN_POSITIVE);
    for (k, u) in values.iter_mut().enumerate() {
        let t = obs.t_tilde + k as f64 * dt;
        let v = crate::forward::eval_v(src, cfg, obs.x, t, opts)?;
        if v.abs() > floor {
            return Err(Error::FieldOnWindow { t, value: v });
        }
        *u += v;
    }

    let series = TimeSeries::new(obs.t_tilde, dt, values)?;
    let mut window = MeasurementWindow::new(obs.x, obs.t_tilde, length, series)?;
    // Only the modes the caller built beyond the truncation contribute.
    window.tail_bound = series_tail_bound(all_modes, cfg, obs.x, vz.l1_norm(), obs.n_modes)?;
    Ok(Simulation { window, vz })
}

/// [`simulate`] without the internal field.
pub fn simulate_measurement<S: SourceModel + ?Sized>(
    src: &S,
    cfg: &MediumConfig,
    modes: &[EigenMode],
    obs: &Observation,
    opts: &QuadOptions,
) -> Result<MeasurementWindow> {
    simulate(src, cfg, modes, obs, opts).map(|s| s.window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::default_options;
    use crate::source::{BumpSource, FnSource};
    use crate::spectrum::build_modes;
    use crate::geometry::Ball;

    fn setup() -> (MediumConfig, Vec<EigenMode>) {
        let cfg = MediumConfig::with_scale(2.0, 0.01, 1.0, [0.1, 0.0, 0.0]).unwrap();
        let modes = build_modes(&cfg, 16).unwrap();
        (cfg, modes)
    }

    #[test]
    fn zero_field_gives_zero_perturbation() {
        let (cfg, modes) = setup();
        let vz = TimeSeries::new(0.0, 0.01, vec![0.0; 500]).unwrap();
        let w = eval_w_dominant(&modes, &cfg, [2.0, 0.0, 0.0], &vz, 3.0, 8).unwrap();
        assert_eq!(w, 0.0);
    }

    #[test]
    fn zero_before_arrival() {
        let (cfg, modes) = setup();
        let vz = TimeSeries::from_fn(0.0, 0.01, 500, |s| s.sin()).unwrap();
        let x = [2.1, 0.0, 0.0];
        assert_eq!(eval_w_dominant(&modes, &cfg, x, &vz, 0.99, 8).unwrap(), 0.0);
        assert!(eval_w_dominant(&modes, &cfg, x, &vz, 1.5, 8).unwrap() != 0.0);
    }

    #[test]
    fn single_mode_resonant_convolution() {
        // ∫_0^τ sin(ω(τ - σ)) sin(ωσ) dσ = (sin(ωτ) - ωτ cos(ωτ)) / (2ω)
        let (cfg, modes) = setup();
        let w1 = modes[0].omega;
        let x = [3.1, 0.0, 0.0];
        let delay = 3.0 / cfg.c0();
        let alpha = alpha_weight(&modes[0], x, &cfg).unwrap();
        let vz = TimeSeries::from_fn(0.0, 1e-3, 400_001, |s| (w1 * s).sin()).unwrap();
        for tau in [5.3, 13.3, 250.0] {
            let w = eval_w_dominant(&modes, &cfg, x, &vz, tau + delay, 1).unwrap();
            let exact = alpha * ((w1 * tau).sin() - w1 * tau * (w1 * tau).cos()) / (2.0 * w1);
            assert!((w - exact).abs() < 1e-6 * exact.abs(), "tau={tau}: {w} vs {exact}");
        }
    }

    #[test]
    fn coverage_gap_is_reported() {
        let (cfg, modes) = setup();
        let vz = TimeSeries::new(0.0, 0.01, vec![1.0; 10]).unwrap();
        let err = eval_w_dominant(&modes, &cfg, [2.1, 0.0, 0.0], &vz, 5.0, 2).unwrap_err();
        assert!(matches!(err, Error::CoverageGap { .. }));
        let late = TimeSeries::new(0.5, 0.01, vec![1.0; 1000]).unwrap();
        assert!(eval_w_dominant(&modes, &cfg, [2.1, 0.0, 0.0], &late, 5.0, 2).is_err());
    }

    #[test]
    fn decays_as_inverse_distance() {
        let (cfg, modes) = setup();
        let vz = TimeSeries::from_fn(0.0, 0.01, 1000, |s| (-(s - 2.0) * (s - 2.0)).exp()).unwrap();
        let (x1, x2) = ([1.1, 0.0, 0.0], [2.1, 0.0, 0.0]);
        // Compare at equal retarded time so only the weight differs.
        let w1 = eval_w_dominant(&modes, &cfg, x1, &vz, 4.0 + 0.5, 16).unwrap();
        let w2 = eval_w_dominant(&modes, &cfg, x2, &vz, 4.0 + 1.0, 16).unwrap();
        assert!((w1 - 2.0 * w2).abs() <= 1e-14 * w1.abs(), "{w1} vs {w2}");
    }

    #[test]
    fn tail_bound_properties() {
        let (cfg, modes) = setup();
        let x = [2.1, 0.0, 0.0];
        assert_eq!(series_tail_bound(&modes, &cfg, x, 0.0, 4).unwrap(), 0.0);
        assert_eq!(series_tail_bound(&modes, &cfg, x, 1.0, modes.len()).unwrap(), 0.0);
        let bounds: Vec<f64> = (0..modes.len())
            .map(|n| series_tail_bound(&modes, &cfg, x, 2.0, n).unwrap())
            .collect();
        assert!(bounds.windows(2).all(|w| w[1] < w[0]));
        let direct: f64 = modes[5..].iter().map(|m| alpha_weight(m, x, &cfg).unwrap()).sum::<f64>() * 2.0;
        assert!((bounds[5] - direct).abs() <= 1e-15 * direct);
    }

    #[test]
    fn rejects_early_window() {
        let (cfg, modes) = setup();
        let src = BumpSource::standard([0.0; 3], 0.5, 2.0).unwrap();
        let x = [2.1, 0.0, 0.0];
        let bound = earliest_window(&src, &cfg, x);
        let obs = Observation {
            x,
            t_tilde: bound - 0.01,
            dt: 2.0 * PI / 512.0,
            n_modes: 8,
        };
        match simulate(&src, &cfg, &modes, &obs, &default_options()) {
            Err(Error::WindowTooEarly { bound: b, .. }) => assert_eq!(b, bound),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_source_gives_zero_window() {
        let (cfg, modes) = setup();
        let zero = FnSource::new(|_, _| 0.0, Ball::new([0.0; 3], 0.5), (0.0, 2.0)).unwrap();
        let x = [2.1, 0.0, 0.0];
        let obs = Observation {
            x,
            t_tilde: auto_t_tilde(&zero, &cfg, x),
            dt: 2.0 * PI / 256.0,
            n_modes: 8,
        };
        let win = simulate_measurement(&zero, &cfg, &modes, &obs, &default_options()).unwrap();
        assert_eq!(win.intervals(), 256);
        assert!(win.series.values().iter().all(|&u| u == 0.0));
    }

    #[test]
    fn window_equals_pointwise_dominant_term() {
        let (cfg, modes) = setup();
        let src = BumpSource::standard([0.0; 3], 0.5, 2.0).unwrap();
        let x = [2.1, 0.3, 0.0];
        let obs = Observation {
            x,
            t_tilde: auto_t_tilde(&src, &cfg, x),
            dt: 2.0 * PI / 256.0,
            n_modes: 8,
        };
        let sim = simulate(&src, &cfg, &modes, &obs, &default_options()).unwrap();
        assert!(sim.window.tail_bound > 0.0);
        for k in [0, 17, 128, 256] {
            let t = sim.window.series.time(k);
            let w = eval_w_dominant(&modes, &cfg, x, &sim.vz, t, 8).unwrap();
            let u = sim.window.series.values()[k];
            assert!((u - w).abs() <= 1e-13 * u.abs().max(1e-300), "k={k}: {u} vs {w}");
        }
    }

    #[test]
    fn under_sampling_is_rejected() {
        let (cfg, modes) = setup();
        let src = BumpSource::standard([0.0; 3], 0.5, 2.0).unwrap();
        let x = [2.1, 0.0, 0.0];
        let obs = Observation {
            x,
            t_tilde: auto_t_tilde(&src, &cfg, x),
            dt: 0.2,
            n_modes: 16,
        };
        let err = simulate(&src, &cfg, &modes, &obs, &default_options()).unwrap_err();
        assert!(matches!(err, Error::UnderSampled { .. }));
    }
}
