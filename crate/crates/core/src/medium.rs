use alloc::format;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Homogeneous background plus one ball-shaped high-contrast particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumConfig {
    c0: f64,
    a: f64,
    c1: f64,
    z: Vec3,
}

impl MediumConfig {
    /// Background speed `c0`, particle radius `a`, interior speed `c1`, and
    /// particle center `z`. Requires `0 < c1 < c0` so the contrast
    /// `c0²/c1² - 1` is positive.
    pub fn new(c0: f64, a: f64, c1: f64, z: Vec3) -> Result<Self> {
        for (name, v) in [("c0", c0), ("a", a), ("c1", c1)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be finite and positive, got {v}")));
            }
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("z", "coordinates must be finite"));
        }
        if c1 >= c0 {
            return Err(Error::invalid(
                "c1",
                format!("contrast c0^2/c1^2 - 1 must be positive (c1 = {c1} >= c0 = {c0})"),
            ));
        }
        Ok(MediumConfig { c0, a, c1, z })
    }

    /// Same as [`new`](Self::new) with `c1` chosen so that `b = c1·π/a`.
    pub fn with_scale(c0: f64, a: f64, b: f64, z: Vec3) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::invalid("b", format!("must be finite and positive, got {b}")));
        }
        Self::new(c0, a, b * a / PI, z)
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn z(&self) -> Vec3 {
        self.z
    }

    /// Frequency scale `b = c1·π/a`; the measurement window has length `2π/b`.
    pub fn b(&self) -> f64 {
        self.c1 * PI / self.a
    }

    /// Contrast `q0 = c0²/c1² - 1`.
    pub fn contrast(&self) -> f64 {
        (self.c0 * self.c0) / (self.c1 * self.c1) - 1.0
    }

    /// Copy of this medium with the particle moved to `z`.
    pub fn at(&self, z: Vec3) -> Self {
        MediumConfig { z, ..*self }
    }

    /// Length of the measurement window, `2π/b`.
    pub fn window_length(&self) -> f64 {
        2.0 * PI / self.b()
    }
}
