//! Space-time sources `J(y, t)` with compact support.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{distance, Ball, Vec3};

/// A source term `J(y, t)` supported in `spatial_support() × time_support()`.
pub trait SourceModel {
    fn eval(&self, y: Vec3, t: f64) -> f64;

    /// Ball outside which `J` vanishes for every `t`.
    fn spatial_support(&self) -> Ball;

    /// Interval `[start, end]` outside which `J` vanishes for every `y`.
    fn time_support(&self) -> (f64, f64);

    /// `∫_{S²} J(x + rω, t) dω` in closed form, if the model has one.
    ///
    /// The forward solver falls back to adaptive quadrature over the sphere
    /// when this returns `None`.
    fn sphere_integral(&self, _x: Vec3, _r: f64, _t: f64) -> Option<f64> {
        None
    }

    /// Radii about `x` where `r ↦ ∫_{S²} J(x + rω, t - r/c0) dω` may lose
    /// smoothness: the shell entering and leaving the spatial support and the
    /// retarded time crossing the ends of the temporal support.
    fn radial_breakpoints(&self, x: Vec3, t: f64, c0: f64) -> Vec<f64> {
        let ball = self.spatial_support();
        let l = distance(x, ball.center);
        let (start, end) = self.time_support();
        vec![(l - ball.radius).abs(), l + ball.radius, c0 * (t - start), c0 * (t - end)]
    }
}

impl<S: SourceModel + ?Sized> SourceModel for &S {
    fn eval(&self, y: Vec3, t: f64) -> f64 {
        (**self).eval(y, t)
    }
    fn spatial_support(&self) -> Ball {
        (**self).spatial_support()
    }
    fn time_support(&self) -> (f64, f64) {
        (**self).time_support()
    }
    fn sphere_integral(&self, x: Vec3, r: f64, t: f64) -> Option<f64> {
        (**self).sphere_integral(x, r, t)
    }
    fn radial_breakpoints(&self, x: Vec3, t: f64, c0: f64) -> Vec<f64> {
        (**self).radial_breakpoints(x, t, c0)
    }
}

/// Spatial profile `A (1 - |y - c|²/ρ²)³` on the ball of radius `ρ`, zero
/// outside. Twice continuously differentiable.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpatialBump {
    pub center: Vec3,
    pub radius: f64,
    pub amplitude: f64,
}

impl SpatialBump {
    pub fn new(center: Vec3, radius: f64, amplitude: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid("radius", "must be finite and positive"));
        }
        if !amplitude.is_finite() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("amplitude", "bump parameters must be finite"));
        }
        Ok(SpatialBump {
            center,
            radius,
            amplitude,
        })
    }

    fn profile(&self, dist_sq: f64) -> f64 {
        let s = 1.0 - dist_sq / (self.radius * self.radius);
        if s <= 0.0 {
            0.0
        } else {
            self.amplitude * s * s * s
        }
    }

    pub fn eval(&self, y: Vec3) -> f64 {
        let d = distance(y, self.center);
        self.profile(d * d)
    }

    /// `∫_{S²} S(x + rω) dω`.
    ///
    /// With `L = |x - c|` and `u` the cosine between `ω` and `c - x`, the
    /// profile is the cubic `A (α + βu)³` in `u`, integrated exactly by
    /// two-point Gauss-Legendre over the part of `[-1, 1]` inside the ball.
    pub fn sphere_integral(&self, x: Vec3, r: f64) -> f64 {
        let rho_sq = self.radius * self.radius;
        let l = distance(x, self.center);
        let rl = r * l;
        if rl == 0.0 {
            let d = r.max(l);
            return 4.0 * PI * self.profile(d * d);
        }
        let alpha = 1.0 - (r * r + l * l) / rho_sq;
        let beta = 2.0 * rl / rho_sq;
        let u_lo = ((r * r + l * l - rho_sq) / (2.0 * rl)).max(-1.0);
        if u_lo >= 1.0 {
            return 0.0;
        }
        let half = 0.5 * (1.0 - u_lo);
        let mid = 0.5 * (1.0 + u_lo);
        let offset = half / 3.0f64.sqrt();
        let cube = |u: f64| {
            let s = (alpha + beta * u).max(0.0);
            s * s * s
        };
        2.0 * PI * self.amplitude * half * (cube(mid - offset) + cube(mid + offset))
    }
}

/// Temporal profile `(1 - s²)³` with `s = (2(t - start) - T)/T` on
/// `[start, start + T]`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TemporalBump {
    pub start: f64,
    pub duration: f64,
}

impl TemporalBump {
    pub fn new(start: f64, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::invalid("duration", "must be finite and positive"));
        }
        if !start.is_finite() {
            return Err(Error::invalid("start", "must be finite"));
        }
        Ok(TemporalBump { start, duration })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = (2.0 * (t - self.start) - self.duration) / self.duration;
        let q = 1.0 - s * s;
        if q <= 0.0 {
            0.0
        } else {
            q * q * q
        }
    }

    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

/// Separable bump source `J(y, t) = S(y) g(t)`, the default synthetic source.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BumpSource {
    pub spatial: SpatialBump,
    pub temporal: TemporalBump,
}

impl BumpSource {
    pub fn new(spatial: SpatialBump, temporal: TemporalBump) -> Self {
        BumpSource { spatial, temporal }
    }

    /// A bump of unit amplitude active on `[0, duration]`.
    pub fn standard(center: Vec3, radius: f64, duration: f64) -> Result<Self> {
        Ok(BumpSource {
            spatial: SpatialBump::new(center, radius, 1.0)?,
            temporal: TemporalBump::new(0.0, duration)?,
        })
    }

    /// The same source delayed by `tau`.
    pub fn delayed(mut self, tau: f64) -> Self {
        self.temporal.start += tau;
        self
    }
}

impl SourceModel for BumpSource {
    fn eval(&self, y: Vec3, t: f64) -> f64 {
        let g = self.temporal.eval(t);
        if g == 0.0 {
            0.0
        } else {
            self.spatial.eval(y) * g
        }
    }

    fn spatial_support(&self) -> Ball {
        Ball::new(self.spatial.center, self.spatial.radius)
    }

    fn time_support(&self) -> (f64, f64) {
        (self.temporal.start, self.temporal.end())
    }

    fn sphere_integral(&self, x: Vec3, r: f64, t: f64) -> Option<f64> {
        let g = self.temporal.eval(t);
        Some(if g == 0.0 { 0.0 } else { g * self.spatial.sphere_integral(x, r) })
    }
}

/// A general source given by a closure; sphere integrals go through
/// quadrature.
#[derive(Clone, Copy)]
pub struct FnSource<F> {
    f: F,
    support: Ball,
    times: (f64, f64),
}

impl<F: Fn(Vec3, f64) -> f64> FnSource<F> {
    /// `f` must vanish outside `support × [times.0, times.1]`; values outside
    /// are masked to zero.
    pub fn new(f: F, support: Ball, times: (f64, f64)) -> Result<Self> {
        if !(support.radius > 0.0) || !(times.1 >= times.0) {
            return Err(Error::invalid("support", "needs a positive radius and ordered times"));
        }
        Ok(FnSource { f, support, times })
    }
}

impl<F: Fn(Vec3, f64) -> f64> SourceModel for FnSource<F> {
    fn eval(&self, y: Vec3, t: f64) -> f64 {
        if t < self.times.0 || t > self.times.1 || !self.support.contains(y) {
            0.0
        } else {
            (self.f)(y, t)
        }
    }

    fn spatial_support(&self) -> Ball {
        self.support
    }

    fn time_support(&self) -> (f64, f64) {
        self.times
    }
}

/// Pointwise sum of two sources.
#[derive(Debug, Clone, Copy)]
pub struct Superposition<A, B>(pub A, pub B);

impl<A: SourceModel, B: SourceModel> SourceModel for Superposition<A, B> {
    fn eval(&self, y: Vec3, t: f64) -> f64 {
        self.0.eval(y, t) + self.1.eval(y, t)
    }

    fn spatial_support(&self) -> Ball {
        let (a, b) = (self.0.spatial_support(), self.1.spatial_support());
        let d = distance(a.center, b.center);
        if d + b.radius <= a.radius {
            return a;
        }
        if d + a.radius <= b.radius {
            return b;
        }
        let radius = 0.5 * (d + a.radius + b.radius);
        let t = (radius - a.radius) / d;
        let center = [
            a.center[0] + t * (b.center[0] - a.center[0]),
            a.center[1] + t * (b.center[1] - a.center[1]),
            a.center[2] + t * (b.center[2] - a.center[2]),
        ];
        Ball::new(center, radius)
    }

    fn time_support(&self) -> (f64, f64) {
        let (a, b) = (self.0.time_support(), self.1.time_support());
        (a.0.min(b.0), a.1.max(b.1))
    }

    fn sphere_integral(&self, x: Vec3, r: f64, t: f64) -> Option<f64> {
        Some(self.0.sphere_integral(x, r, t)? + self.1.sphere_integral(x, r, t)?)
    }

    fn radial_breakpoints(&self, x: Vec3, t: f64, c0: f64) -> Vec<f64> {
        let mut points = self.0.radial_breakpoints(x, t, c0);
        points.extend(self.1.radial_breakpoints(x, t, c0));
        points
    }
}
