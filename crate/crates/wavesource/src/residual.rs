//! Finite-difference check that a computed field solves
//! `c0⁻² V_tt - ΔV = J`.

use rayon::prelude::*;
use serde::Serialize;
use wavesource_core::forward::eval_v;
use wavesource_core::quadrature::QuadOptions;
use wavesource_core::source::SourceModel;
use wavesource_core::{MediumConfig, Vec3};

/// Discrete residual of the wave equation over a cubic lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeResidual {
    /// Lattice spacing.
    pub h: f64,
    /// Time step.
    pub dt: f64,
    /// Interior points per axis.
    pub points_per_axis: usize,
    pub times: usize,
    /// `‖c0⁻² D_tt V - Δ_h V - J‖₂` over all points and times.
    pub residual_norm: f64,
    /// `‖J‖₂` over the same samples.
    pub source_norm: f64,
    pub relative: f64,
}

/// Evaluates the residual with centered second differences on the
/// `(2·half + 1)³` lattice of spacing `h` around `center`, at each instant in
/// `times`, with time step `dt`.
#[allow(clippy::too_many_arguments)]
pub fn pde_residual<S: SourceModel + Sync + ?Sized>(
    src: &S,
    cfg: &MediumConfig,
    center: Vec3,
    h: f64,
    half: usize,
    dt: f64,
    times: &[f64],
    opts: &QuadOptions,
) -> wavesource_core::Result<PdeResidual> {
    let n = 2 * half + 1;
    // Padded lattice: one extra layer for the Laplacian.
    let m = n + 2;
    let point = |i: usize, j: usize, k: usize| -> Vec3 {
        let off = |q: usize| (q as f64 - (half + 1) as f64) * h;
        [center[0] + off(i), center[1] + off(j), center[2] + off(k)]
    };
    let c0 = cfg.c0();
    let (mut res2, mut src2) = (0.0, 0.0);
    for &t in times {
        let now: Vec<f64> = (0..m * m * m)
            .into_par_iter()
            .map(|idx| eval_v(src, cfg, point(idx / (m * m), idx / m % m, idx % m), t, opts))
            .collect::<Result<_, _>>()?;
        let at = |i: usize, j: usize, k: usize| now[(i * m + j) * m + k];
        let terms: Vec<(f64, f64)> = (0..n * n * n)
            .into_par_iter()
            .map(|idx| {
                let (i, j, k) = (idx / (n * n) + 1, idx / n % n + 1, idx % n + 1);
                let y = point(i, j, k);
                let before = eval_v(src, cfg, y, t - dt, opts)?;
                let after = eval_v(src, cfg, y, t + dt, opts)?;
                let v = at(i, j, k);
                let vtt = (after - 2.0 * v + before) / (dt * dt);
                let lap = (at(i + 1, j, k) + at(i - 1, j, k) + at(i, j + 1, k) + at(i, j - 1, k) + at(i, j, k + 1)
                    + at(i, j, k - 1)
                    - 6.0 * v)
                    / (h * h);
                let source = src.eval(y, t);
                Ok((vtt / (c0 * c0) - lap - source, source))
            })
            .collect::<Result<_, wavesource_core::Error>>()?;
        for (r, s) in terms {
            res2 += r * r;
            src2 += s * s;
        }
    }
    let (residual_norm, source_norm) = (res2.sqrt(), src2.sqrt());
    Ok(PdeResidual {
        h,
        dt,
        points_per_axis: n,
        times: times.len(),
        residual_norm,
        source_norm,
        relative: if source_norm > 0.0 { residual_norm / source_norm } else { residual_norm },
    })
}
