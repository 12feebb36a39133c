//! Radially symmetric eigenmodes of the Newtonian potential on a ball.
//!
//! Only the `l = 0` family has eigenfunctions with a nonzero average over the
//! ball, so only those modes enter the perturbation series. Their eigenvalues
//! are `λ_j = a²/μ_j²` where `μ_j` is the unique root of
//! `sin μ + 2μ cos μ = 0` in `(jπ - π/2, jπ + π/2)`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{distance, Vec3};
use crate::medium::MediumConfig;

/// Default tolerance on the scaled residual `|sin μ + 2μ cos μ| / (1 + 2μ)`.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Iteration cap of the bracketed Newton solver.
pub const MAX_ROOT_ITERATIONS: usize = 200;

/// `sin μ + 2μ cos μ`, the continuous form of `tan μ = -2μ`.
#[inline]
pub fn characteristic(mu: f64) -> f64 {
    mu.sin() + 2.0 * mu * mu.cos()
}

#[inline]
fn characteristic_derivative(mu: f64) -> f64 {
    3.0 * mu.cos() - 2.0 * mu * mu.sin()
}

/// Open bracket `(jπ - π/2, jπ + π/2)` holding the `j`-th root.
pub fn root_bracket(j: usize) -> (f64, f64) {
    let center = j as f64 * PI;
    (center - FRAC_PI_2, center + FRAC_PI_2)
}

/// The `j`-th root `μ_j` (1-based), by Newton iteration safeguarded with
/// bisection inside the bracket, then polished to the neighbouring double with
/// the smallest residual.
pub fn mu_root(j: usize, tol: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::invalid("j", "mode indices start at 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let (mut lo, mut hi) = root_bracket(j);
    let (bracket_lo, bracket_hi) = (lo, hi);
    let f_lo_positive = characteristic(lo) > 0.0;
    // tan μ = -2μ puts the root at jπ - π/2 + γ with γ ≈ 1/(2μ).
    let mut x = (lo + 0.5 / lo).min(lo + 0.5 * (hi - lo));
    for _ in 0..MAX_ROOT_ITERATIONS {
        let fx = characteristic(x);
        if fx.abs() <= tol * (1.0 + 2.0 * x) {
            return Ok(polish(x));
        }
        if (fx > 0.0) == f_lo_positive {
            lo = x;
        } else {
            hi = x;
        }
        if hi.next_down() <= lo {
            return Ok(polish(x));
        }
        let newton = x - fx / characteristic_derivative(x);
        x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Err(Error::RootNotConverged {
        lo: bracket_lo,
        hi: bracket_hi,
        iterations: MAX_ROOT_ITERATIONS,
    })
}

fn polish(mut x: f64) -> f64 {
    let mut best = characteristic(x).abs();
    loop {
        let down = x.next_down();
        let up = x.next_up();
        let (fd, fu) = (characteristic(down).abs(), characteristic(up).abs());
        if fd < best && fd <= fu {
            x = down;
            best = fd;
        } else if fu < best {
            x = up;
            best = fu;
        } else {
            return x;
        }
    }
}

/// The first `j_max` roots `μ_1 < μ_2 < ... < μ_{j_max}`.
pub fn solve_mu_roots(j_max: usize, tol: f64) -> Result<Vec<f64>> {
    (1..=j_max).map(|j| mu_root(j, tol)).collect()
}

/// One relevant (`l = 0`) eigenmode of the Newtonian potential on a ball of
/// radius `a`, with its eigenfunction normalized in `L²(D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenMode {
    /// 1-based index.
    pub j: usize,
    pub mu: f64,
    /// Eigenvalue `a²/μ²`.
    pub lambda: f64,
    /// Resonance frequency `c1/√λ = c1·μ/a`.
    pub omega: f64,
    /// Offset `μ - (jπ - π/2)`.
    pub gamma: f64,
    /// `∫_D e_j` for the unit-norm eigenfunction.
    pub avg: f64,
}

/// Amplitude `C` such that `e(r) = C sin(μ r/a)/r` has unit `L²` norm on the
/// ball of radius `a`.
pub fn normalization(mu: f64, a: f64) -> f64 {
    let norm_sq = 2.0 * PI * a * (1.0 - (2.0 * mu).sin() / (2.0 * mu));
    1.0 / norm_sq.sqrt()
}

impl EigenMode {
    fn from_root(j: usize, mu: f64, cfg: &MediumConfig) -> Self {
        let a = cfg.a();
        let c = normalization(mu, a);
        let ratio = a / mu;
        // 4π C ∫_0^a r sin(μr/a) dr
        let avg = 4.0 * PI * c * ratio * ratio * (mu.sin() - mu * mu.cos());
        EigenMode {
            j,
            mu,
            lambda: ratio * ratio,
            omega: cfg.c1() * mu / a,
            gamma: mu - (j as f64 * PI - FRAC_PI_2),
            avg,
        }
    }

    /// Eigenfunction value at distance `r` from the particle center.
    pub fn eigenfunction(&self, a: f64, r: f64) -> f64 {
        if r > a {
            return 0.0;
        }
        let c = normalization(self.mu, a);
        let k = self.mu / a;
        if r == 0.0 {
            c * k
        } else {
            c * (k * r).sin() / r
        }
    }

    /// Weight `α_j(x, z) = ω_j (∫_D e_j)² / (4π |x - z| λ_j)`.
    pub fn alpha(&self, x: Vec3, cfg: &MediumConfig) -> Result<f64> {
        alpha_weight(self, x, cfg)
    }

    /// Coefficient of the convolution integral in the dominant term:
    /// `c1 λ^{-3/2} (∫e)² / (4π|x - z|)`, identical to [`alpha_weight`].
    fn series_coefficient(&self, dist: f64, cfg: &MediumConfig) -> f64 {
        cfg.c1() * self.lambda.powf(-1.5) * self.avg * self.avg / (4.0 * PI * dist)
    }
}

/// Relevant eigenmodes `1..=j_max` for the particle in `cfg`.
pub fn build_modes(cfg: &MediumConfig, j_max: usize) -> Result<Vec<EigenMode>> {
    build_modes_with_tol(cfg, j_max, DEFAULT_ROOT_TOL)
}

pub fn build_modes_with_tol(cfg: &MediumConfig, j_max: usize, tol: f64) -> Result<Vec<EigenMode>> {
    let roots = solve_mu_roots(j_max, tol)?;
    Ok(roots
        .into_iter()
        .enumerate()
        .map(|(i, mu)| EigenMode::from_root(i + 1, mu, cfg))
        .collect())
}

/// `α_n(x, z) = ω_n (∫_D e_n)² / (4π |x - z| λ_n)`; `x` must differ from the
/// particle center.
pub fn alpha_weight(mode: &EigenMode, x: Vec3, cfg: &MediumConfig) -> Result<f64> {
    let dist = distance(x, cfg.z());
    if dist == 0.0 {
        return Err(Error::ObservationAtCenter);
    }
    Ok(mode.omega * mode.avg * mode.avg / (4.0 * PI * dist * mode.lambda))
}

/// Same weight through the `c1 λ^{-3/2}` form of the series coefficient;
/// exposed for cross-checking the two algebraic routes.
pub fn series_coefficient(mode: &EigenMode, x: Vec3, cfg: &MediumConfig) -> Result<f64> {
    let dist = distance(x, cfg.z());
    if dist == 0.0 {
        return Err(Error::ObservationAtCenter);
    }
    Ok(mode.series_coefficient(dist, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadOptions};

    fn unit_ball_b1() -> MediumConfig {
        MediumConfig::new(1.0, 1.0, 1.0 / PI, [0.0; 3]).unwrap()
    }

    fn bisection_oracle(lo: f64, hi: f64) -> f64 {
        let (mut lo, mut hi) = (lo, hi);
        let s_lo = characteristic(lo).signum();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if characteristic(mid).signum() == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn empty_request() {
        assert!(solve_mu_roots(0, 1e-12).unwrap().is_empty());
        assert!(build_modes(&unit_ball_b1(), 0).unwrap().is_empty());
    }

    #[test]
    fn first_root_matches_bisection() {
        let mu = mu_root(1, DEFAULT_ROOT_TOL).unwrap();
        let oracle = bisection_oracle(FRAC_PI_2, 1.5 * PI);
        assert!((mu - oracle).abs() < 1e-14, "{mu} vs {oracle}");
        assert!((mu - 1.8366).abs() < 1e-4);
        assert!(characteristic(mu).abs() < DEFAULT_ROOT_TOL);
    }

    #[test]
    fn fiftieth_root_gap() {
        let roots = solve_mu_roots(50, DEFAULT_ROOT_TOL).unwrap();
        let gamma = |j: usize| roots[j - 1] - (j as f64 * PI - FRAC_PI_2);
        assert!(gamma(50) > 0.0 && gamma(50) < gamma(49));
    }

    #[test]
    fn tan_form_residual_small_indices() {
        for j in 1..=5 {
            let mu = mu_root(j, DEFAULT_ROOT_TOL).unwrap();
            assert!((mu.tan() + 2.0 * mu).abs() < 1e-10, "j = {j}");
        }
    }

    #[test]
    fn roots_sit_in_brackets_and_increase() {
        let roots = solve_mu_roots(100, DEFAULT_ROOT_TOL).unwrap();
        for (i, &mu) in roots.iter().enumerate() {
            let (lo, hi) = root_bracket(i + 1);
            assert!(mu > lo && mu < hi);
            assert!(characteristic(mu).abs() < 1e-10);
        }
        assert!(roots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn gaps_decrease_and_stay_small() {
        let modes = build_modes(&unit_ball_b1(), 100).unwrap();
        assert!(modes.windows(2).all(|w| w[0].gamma > w[1].gamma && w[1].gamma > 0.0));
        assert!(modes[1..].iter().all(|m| m.gamma < 0.3));
    }

    #[test]
    fn first_frequency_at_unit_scale() {
        let modes = build_modes(&unit_ball_b1(), 1).unwrap();
        let m = modes[0];
        assert!((m.omega - m.mu / PI).abs() < 1e-15);
        assert!((m.omega - 0.5846).abs() < 1e-4);
        assert!((m.omega - (0.5 + m.gamma / PI)).abs() < 1e-14);
    }

    #[test]
    fn doubling_radius_halves_frequencies() {
        let small = MediumConfig::new(1.0, 0.5, 0.1, [0.0; 3]).unwrap();
        let large = MediumConfig::new(1.0, 1.0, 0.1, [0.0; 3]).unwrap();
        let ms = build_modes(&small, 20).unwrap();
        let ml = build_modes(&large, 20).unwrap();
        for (s, l) in ms.iter().zip(&ml) {
            assert_eq!(s.omega, 2.0 * l.omega);
        }
    }

    #[test]
    fn derived_fields_are_consistent() {
        let cfg = MediumConfig::new(3.0, 0.2, 0.7, [0.0; 3]).unwrap();
        for m in build_modes(&cfg, 30).unwrap() {
            let lambda = cfg.a() * cfg.a() / (m.mu * m.mu);
            assert!((m.lambda - lambda).abs() <= 1e-14 * lambda);
            let omega = cfg.c1() * m.mu / cfg.a();
            assert!((m.omega - omega).abs() <= 1e-14 * omega);
            assert!((m.omega - cfg.c1() / m.lambda.sqrt()).abs() <= 1e-13 * omega);
            assert!(m.avg != 0.0);
        }
    }

    fn radial_integral(f: impl Fn(f64) -> f64, a: f64) -> f64 {
        let opts = QuadOptions::with_rel_tol(1e-14);
        4.0 * PI * integrate(|r| f(r) * r * r, 0.0, a, &opts).unwrap().value
    }

    #[test]
    fn average_matches_quadrature() {
        let cfg = unit_ball_b1();
        let modes = build_modes(&cfg, 10).unwrap();
        for m in &modes {
            let avg = radial_integral(|r| m.eigenfunction(cfg.a(), r), cfg.a());
            assert!((avg - m.avg).abs() <= 1e-10 * m.avg.abs(), "j = {}", m.j);
        }
    }

    #[test]
    fn eigenfunctions_have_unit_norm() {
        for a in [1.0, 0.05] {
            let cfg = MediumConfig::new(1.0, a, a / PI, [0.0; 3]).unwrap();
            for m in build_modes(&cfg, 20).unwrap() {
                let norm_sq = radial_integral(|r| m.eigenfunction(a, r).powi(2), a);
                assert!((norm_sq - 1.0).abs() < 1e-10, "a = {a}, j = {}", m.j);
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let cfg = unit_ball_b1();
        let m = build_modes(&cfg, 1).unwrap()[0];
        let x = [10.0, 0.0, 0.0];
        let alpha = alpha_weight(&m, x, &cfg).unwrap();
        let lambda = 1.0 / (m.mu * m.mu);
        let expected = (m.mu / PI) * m.avg * m.avg / (4.0 * PI * 10.0 * lambda);
        assert!((alpha - expected).abs() <= 1e-14 * expected);
        let alpha_far = alpha_weight(&m, [20.0, 0.0, 0.0], &cfg).unwrap();
        assert_eq!(alpha, 2.0 * alpha_far);
        let coeff = series_coefficient(&m, x, &cfg).unwrap();
        assert!((coeff - alpha).abs() <= 1e-13 * alpha);

        let degenerate = EigenMode { avg: 0.0, ..m };
        assert_eq!(alpha_weight(&degenerate, x, &cfg).unwrap(), 0.0);
        assert_eq!(alpha_weight(&m, cfg.z(), &cfg), Err(Error::ObservationAtCenter));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(mu_root(0, 1e-12).is_err());
        assert!(mu_root(1, 0.0).is_err());
    }
}
