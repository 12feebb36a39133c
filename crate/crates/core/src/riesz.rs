//! Nonharmonic Riesz basis `{cos(ω_n t), sin(ω_n t)}` on `[-π, π]` and its
//! biorthogonal dual.
//!
//! The operator `T` sends the Fourier system `ξ_n ∈ {cos((n-1)t), sin(nt)}`
//! to `p_n ∈ {cos(ω_n t), sin(ω_n t)}`. It is truncated to order `N` in the
//! orthonormal Fourier basis
//!
//! ```text
//! φ^c_0 = 1/√(2π),  φ^c_j = cos(jt)/√π  (j = 1..N-1),  φ^s_j = sin(jt)/√π  (j = 1..N),
//! ```
//!
//! with columns scaled by `1/‖ξ_n‖`, so integer frequencies give `T = I`.
//! Parity makes `T` block diagonal, `T = T_c ⊕ T_s`, and each block is
//! inverted separately. The duals are normalized to be exactly biorthogonal,
//! `⟨g_m, cos(ω_n ·)⟩ = ⟨h_m, sin(ω_n ·)⟩ = δ_mn`, so a function
//! `f = Σ a_n cos(ω_n t) + b_n sin(ω_n t)` has `a_n = ⟨f, g_n⟩`,
//! `b_n = ⟨f, h_n⟩`.
//!
//! Everything here runs on `[-π, π]`; an interval `[-π/b, π/b]` maps onto it
//! through `t -> bt`, with duals `b·g_n(bt)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use nalgebra::{DMatrix, DVector};
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::gregory_weights;
use crate::series::TimeSeries;

/// Largest condition number accepted by [`RieszSystem::build`].
pub const MAX_CONDITION: f64 = 1e12;

/// Minimum samples per period of the highest frequency for sampled
/// expansions.
pub const SAMPLES_PER_PERIOD: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Trig {
    Cos,
    Sin,
}

impl Trig {
    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Trig::Cos => x.cos(),
            Trig::Sin => x.sin(),
        }
    }
}

// sin(aπ)/a, continuous at a = 0.
#[inline]
fn sinc_pi(a: f64) -> f64 {
    if a == 0.0 {
        PI
    } else {
        (a * PI).sin() / a
    }
}

/// `∫_{-π}^{π} p(w1 t) q(w2 t) dt` in closed form.
pub fn trig_inner(w1: f64, p: Trig, w2: f64, q: Trig) -> f64 {
    match (p, q) {
        (Trig::Cos, Trig::Cos) => sinc_pi(w1 - w2) + sinc_pi(w1 + w2),
        (Trig::Sin, Trig::Sin) => sinc_pi(w1 - w2) - sinc_pi(w1 + w2),
        _ => 0.0,
    }
}

/// `∫_{-π}^{π} p(ω t) q(k t) dt` against the integer Fourier frequency `k`.
pub fn fourier_inner(omega: f64, k: usize, p: Trig, q: Trig) -> f64 {
    trig_inner(omega, p, k as f64, q)
}

/// Which family of dual functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dual {
    /// `g_n`, dual to `cos(ω_n t)`.
    G,
    /// `h_n`, dual to `sin(ω_n t)`.
    H,
}

/// Unit-norm Fourier basis function: cosine index `j = 0..N`, sine index
/// `j = 1..=N`.
#[inline]
pub fn fourier_basis(kind: Trig, j: usize, t: f64) -> f64 {
    match kind {
        Trig::Cos if j == 0 => 1.0 / TAU.sqrt(),
        Trig::Cos => (j as f64 * t).cos() / PI.sqrt(),
        Trig::Sin => (j as f64 * t).sin() / PI.sqrt(),
    }
}

/// `‖cos(k·)‖` on `[-π, π]`, the normalizer of `ξ_n` for `k = n - 1`.
#[inline]
fn cos_norm(k: usize) -> f64 {
    if k == 0 {
        TAU.sqrt()
    } else {
        PI.sqrt()
    }
}

/// Truncated change of basis and its dual functions.
#[derive(Debug, Clone)]
pub struct RieszSystem {
    n: usize,
    omegas_cos: Vec<f64>,
    omegas_sin: Vec<f64>,
    t_cos: DMatrix<f64>,
    t_sin: DMatrix<f64>,
    t_cos_inv: DMatrix<f64>,
    t_sin_inv: DMatrix<f64>,
    dual_g: DMatrix<f64>,
    dual_h: DMatrix<f64>,
    sigma_min: f64,
    sigma_max: f64,
}

impl RieszSystem {
    /// System for `{cos(ω_n t), sin(ω_n t)}`, `n = 1..=N`.
    pub fn build(omegas: &[f64], n: usize) -> Result<Self> {
        Self::build_split(omegas, omegas, n)
    }

    /// System with separate frequency lists for the cosine and sine
    /// families.
    pub fn build_split(cos_omegas: &[f64], sin_omegas: &[f64], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "truncation order must be at least 1"));
        }
        if cos_omegas.len() < n || sin_omegas.len() < n {
            return Err(Error::IndexOutOfRange {
                n,
                max: cos_omegas.len().min(sin_omegas.len()),
            });
        }
        let (wc, ws) = (&cos_omegas[..n], &sin_omegas[..n]);
        if wc.iter().chain(ws).any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::invalid("omegas", "frequencies must be finite and non-negative"));
        }
        for family in [wc, ws] {
            for (i, a) in family.iter().enumerate() {
                if family[i + 1..].contains(a) {
                    return Err(Error::SingularSystem { cond: f64::INFINITY });
                }
            }
        }

        let t_cos = DMatrix::from_fn(n, n, |j, m| trig_inner(j as f64, Trig::Cos, wc[m], Trig::Cos) / (cos_norm(j) * cos_norm(m)));
        let t_sin = DMatrix::from_fn(n, n, |j, m| trig_inner((j + 1) as f64, Trig::Sin, ws[m], Trig::Sin) / PI);

        let sv_c = t_cos.singular_values();
        let sv_s = t_sin.singular_values();
        let sigma_max = sv_c.max().max(sv_s.max());
        let sigma_min = sv_c.min().min(sv_s.min());
        let cond = sigma_max / sigma_min;
        if !(cond <= MAX_CONDITION) {
            return Err(Error::SingularSystem { cond });
        }
        let singular = || Error::SingularSystem { cond };
        let t_cos_inv = t_cos.clone().lu().try_inverse().ok_or_else(singular)?;
        let t_sin_inv = t_sin.clone().lu().try_inverse().ok_or_else(singular)?;

        let dual_g = DMatrix::from_fn(n, n, |j, m| t_cos_inv[(m, j)] / cos_norm(m));
        let dual_h = DMatrix::from_fn(n, n, |j, m| t_sin_inv[(m, j)] / PI.sqrt());

        Ok(RieszSystem {
            n,
            omegas_cos: wc.to_vec(),
            omegas_sin: ws.to_vec(),
            t_cos,
            t_sin,
            t_cos_inv,
            t_sin_inv,
            dual_g,
            dual_h,
            sigma_min,
            sigma_max,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omegas(&self, family: Trig) -> &[f64] {
        match family {
            Trig::Cos => &self.omegas_cos,
            Trig::Sin => &self.omegas_sin,
        }
    }

    pub fn block(&self, family: Trig) -> &DMatrix<f64> {
        match family {
            Trig::Cos => &self.t_cos,
            Trig::Sin => &self.t_sin,
        }
    }

    pub fn block_inverse(&self, family: Trig) -> &DMatrix<f64> {
        match family {
            Trig::Cos => &self.t_cos_inv,
            Trig::Sin => &self.t_sin_inv,
        }
    }

    /// The full `2N × 2N` matrix `T_c ⊕ T_s`.
    pub fn t_matrix(&self) -> DMatrix<f64> {
        block_diagonal(&self.t_cos, &self.t_sin)
    }

    pub fn t_inverse(&self) -> DMatrix<f64> {
        block_diagonal(&self.t_cos_inv, &self.t_sin_inv)
    }

    /// Coefficients of the duals in the orthonormal Fourier basis; column
    /// `m` holds `g_{m+1}` (or `h_{m+1}`).
    pub fn dual_coefficients(&self, which: Dual) -> &DMatrix<f64> {
        match which {
            Dual::G => &self.dual_g,
            Dual::H => &self.dual_h,
        }
    }

    /// `σ_max(T)/σ_min(T)`.
    pub fn cond(&self) -> f64 {
        self.sigma_max / self.sigma_min
    }

    pub fn singular_value_range(&self) -> (f64, f64) {
        (self.sigma_min, self.sigma_max)
    }

    /// Frame bounds `(σ_min², σ_max²)` for combinations of the normalized
    /// functions `p_n/‖ξ_n‖`.
    pub fn frame_bounds(&self) -> (f64, f64) {
        (self.sigma_min * self.sigma_min, self.sigma_max * self.sigma_max)
    }

    /// Largest entry of `T·T⁻¹ - I`.
    pub fn inverse_residual(&self) -> f64 {
        let id = DMatrix::<f64>::identity(self.n, self.n);
        let rc = (&self.t_cos * &self.t_cos_inv - &id).amax();
        let rs = (&self.t_sin * &self.t_sin_inv - &id).amax();
        rc.max(rs)
    }

    /// `g_n(t)` or `h_n(t)` for `1 <= n <= N`, `t ∈ [-π, π]`.
    pub fn eval_dual(&self, which: Dual, n: usize, t: f64) -> Result<f64> {
        if n == 0 || n > self.n {
            return Err(Error::IndexOutOfRange { n, max: self.n });
        }
        if !(t.abs() <= PI * (1.0 + 1e-12)) {
            return Err(Error::invalid("t", "duals live on [-π, π]"));
        }
        let coeffs = self.dual_coefficients(which).column(n - 1);
        let value = match which {
            Dual::G => (0..self.n).map(|j| coeffs[j] * fourier_basis(Trig::Cos, j, t)).sum(),
            Dual::H => (0..self.n).map(|j| coeffs[j] * fourier_basis(Trig::Sin, j + 1, t)).sum(),
        };
        Ok(value)
    }

    /// `(⟨f, g_n⟩, ⟨f, h_n⟩)` for samples of `f` on `grid`.
    pub fn pair(&self, grid: &FourierGrid, values: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_grid(grid)?;
        let (fc, fs) = grid.moments(values)?;
        let a = self.dual_g.tr_mul(&fc);
        let b = self.dual_h.tr_mul(&fs);
        Ok((a.as_slice().to_vec(), b.as_slice().to_vec()))
    }

    /// Samples of `Σ c_n g_n + d_n h_n` on `grid`.
    pub fn synthesize_duals(&self, grid: &FourierGrid, c: &[f64], d: &[f64]) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        if c.len() != self.n || d.len() != self.n {
            return Err(Error::invalid("coefficients", "need N cosine and N sine coefficients"));
        }
        let fc = &self.dual_g * DVector::from_column_slice(c);
        let fs = &self.dual_h * DVector::from_column_slice(d);
        Ok(grid.synthesize(&fc, &fs))
    }

    /// `Σ a_n cos(ω_n t) + b_n sin(ω_n t)` at `t`.
    pub fn synthesize_family(&self, a: &[f64], b: &[f64], t: f64) -> f64 {
        let cos_part: f64 = a.iter().zip(&self.omegas_cos).map(|(an, w)| an * (w * t).cos()).sum();
        let sin_part: f64 = b.iter().zip(&self.omegas_sin).map(|(bn, w)| bn * (w * t).sin()).sum();
        cos_part + sin_part
    }

    fn check_grid(&self, grid: &FourierGrid) -> Result<()> {
        if grid.n != self.n {
            return Err(Error::GridMismatch(alloc::format!(
                "grid tabulates {} Fourier modes, system has {}",
                grid.n,
                self.n
            )));
        }
        Ok(())
    }

    fn max_omega(&self) -> f64 {
        self.omegas_cos.iter().chain(&self.omegas_sin).fold(0.0, |m, &w| m.max(w))
    }
}

fn block_diagonal(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((n, n), (n, n)).copy_from(b);
    m
}

/// How sampled data are paired with the Fourier basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PairingRule {
    /// Composite trapezoid rule on the product of data and basis function.
    Trapezoid,
    /// Trapezoid with Gregory end corrections.
    Gregory,
    /// Product integration: a local degree-7 interpolant of the data is
    /// integrated exactly against each basis function. The basis oscillation
    /// never has to be resolved by the data grid, so this stays accurate up
    /// to the sampling limit of the data alone.
    #[default]
    Interpolatory,
}

// 8-point Gauss-Legendre rule on [-1, 1].
const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

// Interpolation stencil width for the product rule.
const STENCIL: usize = 8;

/// Orthonormal Fourier basis tabulated on a uniform grid of `[-π, π]`,
/// with the quadrature operator that pairs sampled data against it.
#[derive(Debug, Clone)]
pub struct FourierGrid {
    n: usize,
    intervals: usize,
    rule: PairingRule,
    weights: Vec<f64>,
    // Row j: φ^c_j (resp. φ^s_{j+1}) at the grid nodes.
    table_cos: DMatrix<f64>,
    table_sin: DMatrix<f64>,
    // Row j maps samples to ⟨f, φ_j⟩.
    pair_cos: DMatrix<f64>,
    pair_sin: DMatrix<f64>,
}

impl FourierGrid {
    /// Grid with the default [`PairingRule`].
    pub fn new(n: usize, intervals: usize) -> Result<Self> {
        Self::with_rule(n, intervals, PairingRule::default())
    }

    pub fn with_rule(n: usize, intervals: usize, rule: PairingRule) -> Result<Self> {
        if intervals < STENCIL {
            return Err(Error::invalid("intervals", "need at least 8 intervals"));
        }
        let h = TAU / intervals as f64;
        let theta = |k: usize| -PI + k as f64 * h;
        let table_cos = DMatrix::from_fn(n, intervals + 1, |j, k| fourier_basis(Trig::Cos, j, theta(k)));
        let table_sin = DMatrix::from_fn(n, intervals + 1, |j, k| fourier_basis(Trig::Sin, j + 1, theta(k)));
        let weights = gregory_weights(intervals + 1, h);
        let (pair_cos, pair_sin) = match rule {
            PairingRule::Trapezoid | PairingRule::Gregory => {
                let w = match rule {
                    PairingRule::Trapezoid => crate::quadrature::trapezoid_weights(intervals + 1, h),
                    _ => weights.clone(),
                };
                let scale = |t: &DMatrix<f64>| DMatrix::from_fn(n, intervals + 1, |j, k| t[(j, k)] * w[k]);
                (scale(&table_cos), scale(&table_sin))
            }
            PairingRule::Interpolatory => product_weights(n, intervals),
        };
        Ok(FourierGrid {
            n,
            intervals,
            rule,
            weights,
            table_cos,
            table_sin,
            pair_cos,
            pair_sin,
        })
    }

    pub fn rule(&self) -> PairingRule {
        self.rule
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn step(&self) -> f64 {
        TAU / self.intervals as f64
    }

    pub fn theta(&self, k: usize) -> f64 {
        -PI + k as f64 * self.step()
    }

    /// Gregory weights, used for norms of sampled data.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature `(⟨f, φ^c_j⟩, ⟨f, φ^s_j⟩)`.
    pub fn moments(&self, values: &[f64]) -> Result<(DVector<f64>, DVector<f64>)> {
        if values.len() != self.intervals + 1 {
            return Err(Error::GridMismatch(alloc::format!(
                "{} samples on a grid of {} nodes",
                values.len(),
                self.intervals + 1
            )));
        }
        let f = DVector::from_column_slice(values);
        Ok((&self.pair_cos * &f, &self.pair_sin * &f))
    }

    /// Samples of `Σ_j fc_j φ^c_j + fs_j φ^s_j`.
    pub fn synthesize(&self, fc: &DVector<f64>, fs: &DVector<f64>) -> Vec<f64> {
        let out = self.table_cos.tr_mul(fc) + self.table_sin.tr_mul(fs);
        out.as_slice().to_vec()
    }
}

// Weights W[j][k] = ∫ φ_j(θ) L_k(θ) dθ, where on each interval the data are
// replaced by the degree-7 interpolant through the 8 nearest nodes. Each
// interval is integrated with 8-point Gauss-Legendre, which is exact to far
// below rounding because an interval spans at most a small fraction of a
// period of φ_j whenever the data are adequately sampled.
fn product_weights(n: usize, intervals: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let h = TAU / intervals as f64;
    let mut gl = [(0.0, 0.0); 8];
    for i in 0..4 {
        gl[2 * i] = (0.5 - 0.5 * GL8_X[i], 0.5 * GL8_W[i]);
        gl[2 * i + 1] = (0.5 + 0.5 * GL8_X[i], 0.5 * GL8_W[i]);
    }
    // Lagrange basis of the nodes 0..8 evaluated at `offset + u` for each
    // Gauss point u in [0, 1] and each possible interval offset.
    let lagrange = |x: f64, i: usize| -> f64 {
        (0..STENCIL)
            .filter(|&m| m != i)
            .map(|m| (x - m as f64) / (i as f64 - m as f64))
            .product()
    };
    let mut basis = [[[0.0; STENCIL]; 8]; STENCIL - 1];
    for (offset, table) in basis.iter_mut().enumerate() {
        for (g, &(u, _)) in gl.iter().enumerate() {
            for (i, entry) in table[g].iter_mut().enumerate() {
                *entry = lagrange(offset as f64 + u, i);
            }
        }
    }

    let mut pc = DMatrix::zeros(n, intervals + 1);
    let mut ps = DMatrix::zeros(n, intervals + 1);
    let mut phi_c = vec![0.0; n];
    let mut phi_s = vec![0.0; n];
    let half = STENCIL / 2 - 1;
    for k in 0..intervals {
        let start = k.saturating_sub(half).min(intervals + 1 - STENCIL);
        let table = &basis[k - start];
        for (g, &(u, w)) in gl.iter().enumerate() {
            let t = -PI + (k as f64 + u) * h;
            for j in 0..n {
                phi_c[j] = fourier_basis(Trig::Cos, j, t) * w * h;
                phi_s[j] = fourier_basis(Trig::Sin, j + 1, t) * w * h;
            }
            for (i, &l) in table[g].iter().enumerate() {
                let col = start + i;
                for j in 0..n {
                    pc[(j, col)] += phi_c[j] * l;
                    ps[(j, col)] += phi_s[j] * l;
                }
            }
        }
    }
    (pc, ps)
}

/// Coefficients of a sampled function in the nonharmonic family.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    /// Cosine coefficients `a_n = ⟨f, g_n⟩`.
    pub a: Vec<f64>,
    /// Sine coefficients `b_n = ⟨f, h_n⟩`.
    pub b: Vec<f64>,
    /// `‖f - Σ a_n cos(ω_n ·) + b_n sin(ω_n ·)‖ / ‖f‖` on the sample grid
    /// (zero for `f = 0`).
    pub residual: f64,
}

/// Expands `f`, sampled on `[-π, π]`, in `{cos(ω_n t), sin(ω_n t)}`.
pub fn expand_in_riesz(sys: &RieszSystem, f: &TimeSeries) -> Result<Expansion> {
    let tol = 1e-9 * f.dt().max(1e-3);
    if (f.t0() + PI).abs() > tol || (f.end() - PI).abs() > tol {
        return Err(Error::CoverageGap {
            have_start: f.t0(),
            have_end: f.end(),
            need_start: -PI,
            need_end: PI,
        });
    }
    let max_dt = TAU / sys.max_omega() / SAMPLES_PER_PERIOD;
    if f.dt() > max_dt {
        return Err(Error::UnderSampled { dt: f.dt(), max_dt });
    }
    let grid = FourierGrid::new(sys.n(), f.len() - 1)?;
    let (a, b) = sys.pair(&grid, f.values())?;
    let (mut num, mut den) = (0.0, 0.0);
    for (k, (&fk, &w)) in f.values().iter().zip(grid.weights()).enumerate() {
        let diff = fk - sys.synthesize_family(&a, &b, grid.theta(k));
        num += w * diff * diff;
        den += w * fk * fk;
    }
    let residual = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
    Ok(Expansion { a, b, residual })
}

/// Outcome of the Riesz-basis stability test on the tail of the frequency
/// offsets.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RieszCondition {
    /// First index of the tail.
    pub j: usize,
    /// `max_{n >= J} |γ_n/π|`.
    pub l: f64,
    /// `(1 + sin 2γπ)^{1/2} (1 - cos lπ) + sin lπ`, below 1 when it holds.
    pub lhs: f64,
}

/// Left-hand side of the perturbation condition for offsets bounded by `l`.
pub fn riesz_condition_lhs(gamma: f64, l: f64) -> f64 {
    (1.0 + (2.0 * gamma * PI).sin()).sqrt() * (1.0 - (l * PI).cos()) + (l * PI).sin()
}

/// Smallest `J <= max_j` for which the condition holds on the offsets
/// `offsets[J-1..]` (the `γ_n`), or `None`.
pub fn check_riesz_condition(offsets: &[f64], gamma: f64, max_j: usize) -> Option<RieszCondition> {
    (1..=max_j.min(offsets.len())).find_map(|j| {
        let l = offsets[j - 1..].iter().fold(0.0f64, |m, g| m.max((g / PI).abs()));
        let lhs = riesz_condition_lhs(gamma, l);
        (lhs < 1.0).then_some(RieszCondition { j, l, lhs })
    })
}

/// Gram matrix `⟨p̂_m, p̂_n⟩` of the normalized family `p_n/‖ξ_n‖`, cosine
/// block then sine block.
pub fn gram_matrix(sys: &RieszSystem) -> DMatrix<f64> {
    let n = sys.n();
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    for m in 0..n {
        for k in 0..n {
            let (wm, wk) = (sys.omegas_cos[m], sys.omegas_cos[k]);
            g[(m, k)] = trig_inner(wm, Trig::Cos, wk, Trig::Cos) / (cos_norm(m) * cos_norm(k));
            let (wm, wk) = (sys.omegas_sin[m], sys.omegas_sin[k]);
            g[(n + m, n + k)] = trig_inner(wm, Trig::Sin, wk, Trig::Sin) / PI;
        }
    }
    g
}

/// Samples `f` on `intervals + 1` uniform nodes of `[-π, π]`.
pub fn sample_on_interval(intervals: usize, f: impl Fn(f64) -> f64) -> Result<TimeSeries> {
    let h = TAU / intervals as f64;
    let values = (0..=intervals).map(|k| f(-PI + k as f64 * h)).collect();
    TimeSeries::new(-PI, h, values)
}
