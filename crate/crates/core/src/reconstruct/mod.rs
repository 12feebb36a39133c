//! Recovery of `V(z, ·)` from one measurement window, and of the source from
//! a lattice of such recoveries.
//!
//! Convention. With `τ = t - T̃ - π/b` the window covers `|τ| <= π/b` and the
//! measured field is read as
//!
//! ```text
//! U(x, t) = Σ_n α_n [A_n sin(ω_n τ) - B_n cos(ω_n τ)],
//! ```
//!
//! so `A_n = α_n⁻¹ ⟨U, h_n^b⟩` and `B_n = -α_n⁻¹ ⟨U, g_n^b⟩`, where
//! `g_n^b(τ) = b g_n(bτ)`. Rotating by `ω_n ψ` with `ψ = T̃ - |x - z|/c0`
//! (the window start measured from the arrival delay) gives the
//! coefficients of `V(z, t) = Σ_n C_n g_n^b(t - π/b) + D_n h_n^b(t - π/b)` on
//! `[0, 2π/b]`.

mod recover;

pub use recover::{recover_source, RecoverOptions, SourceGrid, ZLattice};

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{distance, Vec3};
use crate::medium::MediumConfig;
use crate::perturbation::{series_tail_bound, MeasurementWindow};
use crate::riesz::{FourierGrid, RieszSystem, Trig};
use crate::series::TimeSeries;
use crate::spectrum::{alpha_weight, EigenMode};

/// Human-readable statement of the sign and shift convention, embedded in
/// serialized results.
pub const CONVENTION: &str = "U(x,T~+pi/b+tau) = sum_n alpha_n [A_n sin(omega_n tau) - B_n cos(omega_n tau)] for |tau| <= pi/b; \
A_n = <U,h_n>/alpha_n, B_n = -<U,g_n>/alpha_n; (C_n,D_n) = rotation of (A_n,B_n) by omega_n (T~ - |x-z|/c0); \
V(z,t) = sum_n C_n g_n(t-pi/b) + D_n h_n(t-pi/b) on [0, 2pi/b]";

/// Per-mode coefficients of a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModeCoefficients {
    pub n: usize,
    #[cfg_attr(feature = "serde", serde(rename = "A"))]
    pub a: f64,
    #[cfg_attr(feature = "serde", serde(rename = "B"))]
    pub b: f64,
    #[cfg_attr(feature = "serde", serde(rename = "C"))]
    pub c: f64,
    #[cfg_attr(feature = "serde", serde(rename = "D"))]
    pub d: f64,
}

/// `V(z, ·)` recovered from one window.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub z: Vec3,
    pub coeffs: Vec<ModeCoefficients>,
    /// Reconstructed `V(z, ·)` on `[0, 2π/b]`.
    pub vz: TimeSeries,
    pub tail_bound: f64,
    /// Relative `L²` error against a supplied ground truth.
    pub residual: Option<f64>,
}

impl ReconstructionResult {
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }
}

/// Rotates `(A_n, B_n)` by `ω_n·shift` into `(C_n, D_n)`.
pub fn rotate_to_cd(a: &[f64], b: &[f64], omegas: &[f64], shift: f64) -> (Vec<f64>, Vec<f64>) {
    let mut c = Vec::with_capacity(a.len());
    let mut d = Vec::with_capacity(a.len());
    for ((&an, &bn), &w) in a.iter().zip(b).zip(omegas) {
        let (s, co) = (w * shift).sin_cos();
        c.push(co * an - s * bn);
        d.push(s * an + co * bn);
    }
    (c, d)
}

/// Inverse of [`rotate_to_cd`].
pub fn rotate_from_cd(c: &[f64], d: &[f64], omegas: &[f64], shift: f64) -> (Vec<f64>, Vec<f64>) {
    let mut a = Vec::with_capacity(c.len());
    let mut b = Vec::with_capacity(c.len());
    for ((&cn, &dn), &w) in c.iter().zip(d).zip(omegas) {
        let (s, co) = (w * shift).sin_cos();
        a.push(co * cn + s * dn);
        b.push(-s * cn + co * dn);
    }
    (a, b)
}

/// Builds the Riesz system for the first `n` modes, rescaled to `b = 1`.
pub fn system_for_modes(modes: &[EigenMode], n: usize, cfg: &MediumConfig) -> Result<RieszSystem> {
    if modes.len() < n {
        return Err(Error::IndexOutOfRange { n, max: modes.len() });
    }
    let b = cfg.b();
    let omegas: Vec<f64> = modes[..n].iter().map(|m| m.omega / b).collect();
    RieszSystem::build(&omegas, n)
}

/// Reusable reconstruction pipeline for a fixed system and window grid.
///
/// The Fourier tables behind the dual pairing are built once, so sweeping
/// many particle positions only costs two small matrix products per window.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    sys: RieszSystem,
    grid: FourierGrid,
    b: f64,
}

impl Reconstructor {
    /// Pipeline for windows of `intervals` sample intervals; `sys` must be
    /// built from the mode frequencies divided by `b`.
    pub fn new(sys: RieszSystem, cfg: &MediumConfig, intervals: usize) -> Result<Self> {
        let grid = FourierGrid::new(sys.n(), intervals)?;
        Ok(Reconstructor { sys, grid, b: cfg.b() })
    }

    pub fn system(&self) -> &RieszSystem {
        &self.sys
    }

    pub fn intervals(&self) -> usize {
        self.grid.intervals()
    }

    /// Sample spacing in physical time.
    pub fn dt(&self) -> f64 {
        self.grid.step() / self.b
    }

    fn check_modes(&self, modes: &[EigenMode]) -> Result<()> {
        let n = self.sys.n();
        if modes.len() < n {
            return Err(Error::IndexOutOfRange { n, max: modes.len() });
        }
        for (m, &w) in modes.iter().zip(self.sys.omegas(Trig::Cos)) {
            if (m.omega / self.b - w).abs() > 1e-12 * w.max(1.0) {
                return Err(Error::GridMismatch(alloc::format!(
                    "mode {} has frequency {} but the system was built for {}",
                    m.j,
                    m.omega / self.b,
                    w
                )));
            }
        }
        Ok(())
    }

    fn check_window(&self, window: &MeasurementWindow) -> Result<()> {
        let length = core::f64::consts::TAU / self.b;
        let span = window.intervals() as f64 * window.series.dt();
        if window.intervals() != self.grid.intervals() || (span - length).abs() > 1e-9 * length {
            return Err(Error::GridMismatch(alloc::format!(
                "window of {} intervals spanning {span} does not match {} intervals over {length}",
                window.intervals(),
                self.grid.intervals()
            )));
        }
        Ok(())
    }

    /// `(A_n, B_n)` from the window by pairing against the duals.
    pub fn extract_ab(
        &self,
        window: &MeasurementWindow,
        modes: &[EigenMode],
        cfg: &MediumConfig,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_window(window)?;
        self.check_modes(modes)?;
        let (pg, ph) = self.sys.pair(&self.grid, window.series.values())?;
        let mut a = Vec::with_capacity(pg.len());
        let mut b = Vec::with_capacity(pg.len());
        for ((m, g), h) in modes.iter().zip(pg).zip(ph) {
            let alpha = alpha_weight(m, window.x, cfg)?;
            a.push(h / alpha);
            b.push(-g / alpha);
        }
        Ok((a, b))
    }

    /// `V(z, ·)` on `[0, 2π/b]` from `(C_n, D_n)`.
    pub fn synthesize_vz(&self, c: &[f64], d: &[f64]) -> Result<TimeSeries> {
        let mut values = self.sys.synthesize_duals(&self.grid, c, d)?;
        values.iter_mut().for_each(|v| *v *= self.b);
        TimeSeries::new(0.0, self.dt(), values)
    }

    /// Full pipeline: extraction, rotation, synthesis, tail bound, and the
    /// residual against `truth` (sampled from `t = 0` on the same spacing).
    pub fn reconstruct(
        &self,
        window: &MeasurementWindow,
        modes: &[EigenMode],
        cfg: &MediumConfig,
        truth: Option<&TimeSeries>,
    ) -> Result<ReconstructionResult> {
        let (a, b) = self.extract_ab(window, modes, cfg)?;
        let n = self.sys.n();
        let omegas: Vec<f64> = modes[..n].iter().map(|m| m.omega).collect();
        let shift = window.t_tilde - distance(window.x, cfg.z()) / cfg.c0();
        let (c, d) = rotate_to_cd(&a, &b, &omegas, shift);
        let vz = self.synthesize_vz(&c, &d)?;
        let tail_bound = series_tail_bound(modes, cfg, window.x, vz.l1_norm(), n)?;
        let residual = truth.map(|t| relative_error_on(&vz, t)).transpose()?;
        let coeffs = (0..n)
            .map(|i| ModeCoefficients {
                n: i + 1,
                a: a[i],
                b: b[i],
                c: c[i],
                d: d[i],
            })
            .collect();
        Ok(ReconstructionResult {
            z: cfg.z(),
            coeffs,
            vz,
            tail_bound,
            residual,
        })
    }
}

/// Relative `L²` error of `recon` against the leading samples of `truth`.
pub fn relative_error_on(recon: &TimeSeries, truth: &TimeSeries) -> Result<f64> {
    if truth.len() < recon.len() {
        return Err(Error::CoverageGap {
            have_start: truth.t0(),
            have_end: truth.end(),
            need_start: recon.t0(),
            need_end: recon.end(),
        });
    }
    let head = TimeSeries::new(truth.t0(), truth.dt(), truth.values()[..recon.len()].to_vec())?;
    recon.relative_l2_error(&head)
}

/// `(A_n, B_n)` for a single window.
pub fn extract_ab(
    window: &MeasurementWindow,
    sys: &RieszSystem,
    modes: &[EigenMode],
    cfg: &MediumConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    Reconstructor::new(sys.clone(), cfg, window.intervals())?.extract_ab(window, modes, cfg)
}

/// Samples `Σ C_n g_n^b(t - π/b) + D_n h_n^b(t - π/b)` on `[0, 2π/b]` with
/// spacing as close to `dt` as a whole number of intervals allows.
pub fn synthesize_vz(c: &[f64], d: &[f64], sys: &RieszSystem, b: f64, dt: f64) -> Result<TimeSeries> {
    if !(b > 0.0 && dt > 0.0) {
        return Err(Error::invalid("dt", "b and dt must be positive"));
    }
    let intervals = ((core::f64::consts::TAU / (b * dt)).round() as usize).max(2);
    let grid = FourierGrid::new(sys.n(), intervals)?;
    let mut values = sys.synthesize_duals(&grid, c, d)?;
    values.iter_mut().for_each(|v| *v *= b);
    TimeSeries::new(0.0, core::f64::consts::TAU / (b * intervals as f64), values)
}

/// One-shot [`Reconstructor::reconstruct`].
pub fn reconstruct_field(
    window: &MeasurementWindow,
    sys: &RieszSystem,
    modes: &[EigenMode],
    cfg: &MediumConfig,
    truth: Option<&TimeSeries>,
) -> Result<ReconstructionResult> {
    Reconstructor::new(sys.clone(), cfg, window.intervals())?.reconstruct(window, modes, cfg, truth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riesz::Dual;
    use crate::spectrum::build_modes;
    use core::f64::consts::{PI, TAU};

    const M: usize = 1024;

    fn setup(b: f64, n: usize) -> (MediumConfig, Vec<EigenMode>, Reconstructor) {
        let cfg = MediumConfig::with_scale(2.0, 0.01, b, [0.1, 0.0, 0.0]).unwrap();
        let modes = build_modes(&cfg, n).unwrap();
        let sys = system_for_modes(&modes, n, &cfg).unwrap();
        let rec = Reconstructor::new(sys, &cfg, M).unwrap();
        (cfg, modes, rec)
    }

    fn window_from(cfg: &MediumConfig, x: Vec3, t_tilde: f64, f: impl Fn(f64) -> f64) -> MeasurementWindow {
        let length = cfg.window_length();
        let dt = length / M as f64;
        // f receives τ = t - T̃ - π/b
        let series = TimeSeries::from_fn(t_tilde, dt, M + 1, |t| f(t - t_tilde - 0.5 * length)).unwrap();
        MeasurementWindow::new(x, t_tilde, length, series).unwrap()
    }

    #[test]
    fn rotation_identities() {
        let (a, b) = (vec![0.3, -1.2], vec![2.0, 0.7]);
        let omegas = [0.58, 1.55];
        assert_eq!(rotate_to_cd(&a, &b, &omegas, 0.0), (a.clone(), b.clone()));
        let (c, d) = rotate_to_cd(&[1.0], &[0.0], &[0.5], PI);
        assert!(c[0].abs() < 1e-16 && (d[0] - 1.0).abs() < 1e-16);
        let (c, d) = rotate_to_cd(&a, &b, &omegas, 3.7);
        let (a2, b2) = rotate_from_cd(&c, &d, &omegas, 3.7);
        for i in 0..2 {
            assert!((a2[i] - a[i]).abs() < 1e-14 && (b2[i] - b[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_window_gives_zero_reconstruction() {
        let (cfg, modes, rec) = setup(1.0, 16);
        let w = window_from(&cfg, [3.0, 0.0, 0.0], 5.0, |_| 0.0);
        let r = rec.reconstruct(&w, &modes, &cfg, None).unwrap();
        assert!(r.coeffs.iter().all(|c| c.a == 0.0 && c.b == 0.0 && c.c == 0.0 && c.d == 0.0));
        assert!(r.vz.values().iter().all(|&v| v == 0.0));
        assert_eq!(r.tail_bound, 0.0);
        assert_eq!(r.n(), 16);
    }

    #[test]
    fn single_mode_windows() {
        for b in [1.0, 2.5] {
            let (cfg, modes, rec) = setup(b, 16);
            let x = [3.0, 0.0, 0.0];
            let alpha = alpha_weight(&modes[1], x, &cfg).unwrap();
            let w2 = modes[1].omega;
            let sin_win = window_from(&cfg, x, 4.0, |tau| alpha * (w2 * tau).sin());
            let (a, bb) = rec.extract_ab(&sin_win, &modes, &cfg).unwrap();
            let cos_win = window_from(&cfg, x, 4.0, |tau| -alpha * (w2 * tau).cos());
            let (a2, b2) = rec.extract_ab(&cos_win, &modes, &cfg).unwrap();
            for n in 0..16 {
                let expect = if n == 1 { 1.0 } else { 0.0 };
                assert!((a[n] - expect).abs() < 1e-6 && bb[n].abs() < 1e-6, "b={b} n={n}: {} {}", a[n], bb[n]);
                assert!((b2[n] - expect).abs() < 1e-6 && a2[n].abs() < 1e-6);
            }
        }
    }

    #[test]
    fn alpha_cancels_between_synthesis_and_extraction() {
        let (cfg, modes, rec) = setup(1.0, 16);
        let z = cfg.z();
        let (x1, x2) = ([z[0] + 1.5, 0.0, 0.0], [z[0] + 3.0, 0.0, 0.0]);
        let shape = |tau: f64| (0.7 * tau).sin() * (-tau * tau / 4.0).exp();
        let w1 = window_from(&cfg, x1, 4.0, shape);
        // Same retarded window, half the amplitude.
        let w2 = window_from(&cfg, x2, 4.0 + 1.5 / cfg.c0(), |tau| 0.5 * shape(tau));
        let r1 = rec.reconstruct(&w1, &modes, &cfg, None).unwrap();
        let r2 = rec.reconstruct(&w2, &modes, &cfg, None).unwrap();
        for (p, q) in r1.coeffs.iter().zip(&r2.coeffs) {
            assert!((p.a - q.a).abs() <= 1e-12 * p.a.abs().max(1e-3));
            assert!((p.c - q.c).abs() <= 1e-12 * p.c.abs().max(1e-3));
        }
    }

    #[test]
    fn reconstruction_is_linear() {
        let (cfg, modes, rec) = setup(1.0, 16);
        let x = [3.0, 0.0, 0.0];
        let f1 = |tau: f64| (0.9 * tau).cos() * 1e-4;
        let f2 = |tau: f64| (-(tau - 1.0) * (tau - 1.0)).exp() * 3e-5;
        let w1 = window_from(&cfg, x, 4.0, f1);
        let w2 = window_from(&cfg, x, 4.0, f2);
        let ws = window_from(&cfg, x, 4.0, |tau| f1(tau) + f2(tau));
        let (r1, r2, rs) = (
            rec.reconstruct(&w1, &modes, &cfg, None).unwrap(),
            rec.reconstruct(&w2, &modes, &cfg, None).unwrap(),
            rec.reconstruct(&ws, &modes, &cfg, None).unwrap(),
        );
        let scale = rs.vz.max_abs();
        for k in 0..rs.vz.len() {
            let sum = r1.vz.values()[k] + r2.vz.values()[k];
            assert!((rs.vz.values()[k] - sum).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn synthesis_of_single_dual() {
        let b = 2.0;
        let (_, _, rec) = setup(b, 8);
        let mut c = vec![0.0; 8];
        c[1] = 1.0;
        let vz = rec.synthesize_vz(&c, &[0.0; 8]).unwrap();
        assert!((vz.end() - TAU / b).abs() < 1e-12);
        for (k, &v) in vz.values().iter().enumerate().step_by(37) {
            let t = vz.time(k);
            let g2 = rec.system().eval_dual(Dual::G, 2, (b * t - PI).clamp(-PI, PI)).unwrap();
            assert!((v - b * g2).abs() < 1e-12, "{v} vs {}", b * g2);
        }
        let free = synthesize_vz(&c, &[0.0; 8], rec.system(), b, rec.dt()).unwrap();
        assert_eq!(free.values(), vz.values());
        let zero = synthesize_vz(&[0.0; 8], &[0.0; 8], rec.system(), b, rec.dt()).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn expand_then_synthesize_smooth_field() {
        // V = Σ C_n g_n + D_n h_n with C_n = ⟨V, cos(ω_n(· - π))⟩.
        let (_, _, rec) = setup(1.0, 64);
        let m = 4096;
        let h = TAU / m as f64;
        let v = |t: f64| {
            let s = (t - 2.0) / 1.2;
            if s.abs() < 1.0 { (1.0 - s * s).powi(4) } else { 0.0 }
        };
        let w = crate::quadrature::gregory_weights(m + 1, h);
        let sys = rec.system();
        let coeff = |f: Trig| -> Vec<f64> {
            sys.omegas(f)
                .iter()
                .map(|&om| (0..=m).map(|k| w[k] * v(k as f64 * h) * f.eval(om * (k as f64 * h - PI))).sum())
                .collect()
        };
        let vz = rec.synthesize_vz(&coeff(Trig::Cos), &coeff(Trig::Sin)).unwrap();
        let truth = TimeSeries::from_fn(0.0, vz.dt(), vz.len(), v).unwrap();
        let err = vz.relative_l2_error(&truth).unwrap();
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let (cfg, modes, rec) = setup(1.0, 8);
        let series = TimeSeries::from_fn(4.0, TAU / 512.0, 513, |_| 0.0).unwrap();
        let w = MeasurementWindow::new([3.0, 0.0, 0.0], 4.0, TAU, series).unwrap();
        assert!(matches!(rec.extract_ab(&w, &modes, &cfg), Err(Error::GridMismatch(_))));
        let other = build_modes(&MediumConfig::with_scale(2.0, 0.01, 1.3, [0.0; 3]).unwrap(), 8).unwrap();
        let w = window_from(&cfg, [3.0, 0.0, 0.0], 4.0, |_| 0.0);
        assert!(matches!(rec.extract_ab(&w, &other, &cfg), Err(Error::GridMismatch(_))));
        assert!(matches!(rec.extract_ab(&w, &modes[..4], &cfg), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn residual_against_truth() {
        let (cfg, modes, rec) = setup(1.0, 8);
        let w = window_from(&cfg, [3.0, 0.0, 0.0], 4.0, |_| 0.0);
        let truth = TimeSeries::from_fn(0.0, rec.dt(), M + 1, |t| t.sin()).unwrap();
        let r = rec.reconstruct(&w, &modes, &cfg, Some(&truth)).unwrap();
        assert!((r.residual.unwrap() - 1.0).abs() < 1e-15);
        let short = TimeSeries::from_fn(0.0, rec.dt(), 10, |t| t.sin()).unwrap();
        assert!(rec.reconstruct(&w, &modes, &cfg, Some(&short)).is_err());
    }
}
