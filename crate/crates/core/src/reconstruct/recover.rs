use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::series::TimeSeries;

/// Uniform lattice of particle positions `origin + h·(i, j, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZLattice {
    pub origin: Vec3,
    pub spacing: f64,
    pub dims: [usize; 3],
}

impl ZLattice {
    pub fn new(origin: Vec3, spacing: f64, dims: [usize; 3]) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::invalid("spacing", "must be finite and positive"));
        }
        if dims.contains(&0) {
            return Err(Error::LatticeTooSmall { dims });
        }
        Ok(ZLattice { origin, spacing, dims })
    }

    /// `(2·half + 1)³` points centered on `center`.
    pub fn centered(center: Vec3, spacing: f64, half: usize) -> Result<Self> {
        let offset = half as f64 * spacing;
        let origin = [center[0] - offset, center[1] - offset, center[2] - offset];
        Self::new(origin, spacing, [2 * half + 1; 3])
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index with the last axis fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> Vec3 {
        let h = self.spacing;
        [
            self.origin[0] + i as f64 * h,
            self.origin[1] + j as f64 * h,
            self.origin[2] + k as f64 * h,
        ]
    }

    /// All points in flat-index order.
    pub fn points(&self) -> Vec<Vec3> {
        let [nx, ny, nz] = self.dims;
        let mut out = Vec::with_capacity(self.len());
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    out.push(self.point(i, j, k));
                }
            }
        }
        out
    }
}

/// Controls for [`recover_source`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RecoverOptions {
    /// Finite-difference time step; a whole multiple of the field spacing.
    /// Defaults to the field spacing.
    pub time_step: Option<f64>,
    /// Width of the Gaussian applied across the lattice before
    /// differentiating; off when `None`.
    pub smoothing: Option<f64>,
}

/// Recovered `J` on the interior of a lattice, at the interior instants of
/// the finite-difference time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceGrid {
    pub lattice: ZLattice,
    pub t0: f64,
    pub dt: f64,
    /// Number of output instants.
    pub times: usize,
    /// `values[p·times + m]` at interior point `p` (flat order over the
    /// interior, last axis fastest) and time `t0 + m·dt`.
    pub values: Vec<f64>,
}

impl SourceGrid {
    pub fn interior_dims(&self) -> [usize; 3] {
        self.lattice.dims.map(|d| d - 2)
    }

    /// Interior lattice points in the order of `values`.
    pub fn interior_points(&self) -> Vec<Vec3> {
        let [nx, ny, nz] = self.lattice.dims;
        let mut out = Vec::with_capacity((nx - 2) * (ny - 2) * (nz - 2));
        for i in 1..nx - 1 {
            for j in 1..ny - 1 {
                for k in 1..nz - 1 {
                    out.push(self.lattice.point(i, j, k));
                }
            }
        }
        out
    }

    pub fn time(&self, m: usize) -> f64 {
        self.t0 + m as f64 * self.dt
    }

    /// Rows `(z, t, J)` in storage order.
    pub fn rows(&self) -> impl Iterator<Item = (Vec3, f64, f64)> + '_ {
        let points = self.interior_points();
        let times = self.times;
        (0..self.values.len()).map(move |idx| {
            let (p, m) = (idx / times, idx % times);
            (points[p], self.time(m), self.values[idx])
        })
    }

    /// Relative `L²` distance to `reference(z, t)` over all grid entries.
    pub fn relative_error(&self, reference: impl Fn(Vec3, f64) -> f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (z, t, j) in self.rows() {
            let r = reference(z, t);
            num += (j - r) * (j - r);
            den += r * r;
        }
        if den == 0.0 {
            if num == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (num / den).sqrt()
        }
    }
}

/// `J = c0⁻² D_tt V - Δ_h V` at interior lattice points from the fields
/// `V(z, ·)` at every lattice point (flat order), all on one time grid.
pub fn recover_source(fields: &[TimeSeries], lattice: &ZLattice, c0: f64, opts: &RecoverOptions) -> Result<SourceGrid> {
    if lattice.dims.iter().any(|&d| d < 3) {
        return Err(Error::LatticeTooSmall { dims: lattice.dims });
    }
    if fields.len() != lattice.len() {
        return Err(Error::GridMismatch(alloc::format!(
            "{} fields for a lattice of {} points",
            fields.len(),
            lattice.len()
        )));
    }
    if !(c0 > 0.0) {
        return Err(Error::invalid("c0", "must be positive"));
    }
    let first = &fields[0];
    for f in &fields[1..] {
        f.check_same_grid(first)?;
    }
    let dt = first.dt();
    let stride = match opts.time_step {
        None => 1,
        Some(step) => {
            let s = (step / dt).round();
            if !(s >= 1.0) || (s * dt - step).abs() > 1e-9 * step {
                return Err(Error::invalid("time_step", "must be a positive whole multiple of the field spacing"));
            }
            s as usize
        }
    };
    let len = first.len();
    // Output at sample indices stride·m, m = 1..times, each with a full
    // centered stencil.
    let times = ((len - 1) / stride).saturating_sub(1);
    if times == 0 {
        return Err(Error::invalid("time_step", "too coarse for the field's time span"));
    }

    // Field on the output stencil instants: index m = 0..=times+1.
    let steps = times + 2;
    let mut v = vec![0.0; lattice.len() * steps];
    for (p, f) in fields.iter().enumerate() {
        for m in 0..steps {
            v[p * steps + m] = f.values()[m * stride];
        }
    }
    if let Some(width) = opts.smoothing {
        if !(width > 0.0) {
            return Err(Error::invalid("smoothing", "width must be positive"));
        }
        for axis in 0..3 {
            smooth_axis(&mut v, lattice, steps, axis, width);
        }
    }

    let [nx, ny, nz] = lattice.dims;
    let h2 = lattice.spacing * lattice.spacing;
    let tau = stride as f64 * dt;
    let inv_c2tau2 = 1.0 / (c0 * c0 * tau * tau);
    let mut values = Vec::with_capacity((nx - 2) * (ny - 2) * (nz - 2) * times);
    for i in 1..nx - 1 {
        for j in 1..ny - 1 {
            for k in 1..nz - 1 {
                let at = |i: usize, j: usize, k: usize, m: usize| v[lattice.index(i, j, k) * steps + m];
                for m in 1..=times {
                    let centre = at(i, j, k, m);
                    let vtt = at(i, j, k, m + 1) - 2.0 * centre + at(i, j, k, m - 1);
                    let lap = at(i + 1, j, k, m)
                        + at(i - 1, j, k, m)
                        + at(i, j + 1, k, m)
                        + at(i, j - 1, k, m)
                        + at(i, j, k + 1, m)
                        + at(i, j, k - 1, m)
                        - 6.0 * centre;
                    values.push(vtt * inv_c2tau2 - lap / h2);
                }
            }
        }
    }
    Ok(SourceGrid {
        lattice: *lattice,
        t0: first.t0() + tau,
        dt: tau,
        times,
        values,
    })
}

// Truncated Gaussian along one lattice axis, renormalized near the edges.
fn smooth_axis(v: &mut [f64], lattice: &ZLattice, steps: usize, axis: usize, width: f64) {
    let h = lattice.spacing;
    let radius = (3.0 * width / h).ceil() as isize;
    let kernel: Vec<f64> = (-radius..=radius)
        .map(|o| {
            let d = o as f64 * h / width;
            (-0.5 * d * d).exp()
        })
        .collect();
    let n = lattice.dims[axis] as isize;
    let src = v.to_vec();
    let [nx, ny, nz] = lattice.dims;
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                let pos = [i, j, k][axis] as isize;
                let out = lattice.index(i, j, k) * steps;
                let mut norm = 0.0;
                for (w, o) in kernel.iter().zip(-radius..=radius) {
                    if (0..n).contains(&(pos + o)) {
                        norm += w;
                    }
                }
                for m in 0..steps {
                    let mut acc = 0.0;
                    for (w, o) in kernel.iter().zip(-radius..=radius) {
                        let q = pos + o;
                        if (0..n).contains(&q) {
                            let mut idx = [i, j, k];
                            idx[axis] = q as usize;
                            acc += w * src[lattice.index(idx[0], idx[1], idx[2]) * steps + m];
                        }
                    }
                    v[out + m] = acc / norm;
                }
            }
        }
    }
}
