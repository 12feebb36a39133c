use alloc::format;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::trapezoid_weights;

/// Uniformly sampled scalar signal: `values[k]` is the sample at `t0 + k·dt`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimeSeries {
    t0: f64,
    dt: f64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", format!("must be finite and positive, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(Error::invalid("t0", "must be finite"));
        }
        if values.len() < 2 {
            return Err(Error::invalid("values", format!("need at least 2 samples, got {}", values.len())));
        }
        Ok(TimeSeries { t0, dt, values })
    }

    /// Samples `f(t0 + k·dt)` for `k = 0..n`.
    pub fn from_fn(t0: f64, dt: f64, n: usize, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        let values = (0..n).map(|k| f(t0 + k as f64 * dt)).collect();
        Self::new(t0, dt, values)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Time of the last sample.
    pub fn end(&self) -> f64 {
        self.time(self.values.len() - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |k| self.time(k))
    }

    /// Piecewise-linear interpolant; `None` outside `[t0, end]`.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        let s = (t - self.t0) / self.dt;
        let last = (self.values.len() - 1) as f64;
        // Tolerate rounding at the ends of the grid.
        if s < -1e-9 || s > last + 1e-9 {
            return None;
        }
        let s = s.clamp(0.0, last);
        let k = (s.floor() as usize).min(self.values.len() - 2);
        let frac = s - k as f64;
        Some(self.values[k] + frac * (self.values[k + 1] - self.values[k]))
    }

    /// Trapezoid approximation of `∫ |f| dt`.
    pub fn l1_norm(&self) -> f64 {
        trapezoid_weights(self.len(), self.dt)
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.abs())
            .sum()
    }

    /// Trapezoid approximation of `(∫ f² dt)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        trapezoid_weights(self.len(), self.dt)
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Relative `L²` distance `‖self - reference‖ / ‖reference‖` on a shared
    /// grid.
    pub fn relative_l2_error(&self, reference: &TimeSeries) -> Result<f64> {
        self.check_same_grid(reference)?;
        let w = trapezoid_weights(self.len(), self.dt);
        let (mut num, mut den) = (0.0, 0.0);
        for ((wk, a), b) in w.iter().zip(&self.values).zip(&reference.values) {
            num += wk * (a - b) * (a - b);
            den += wk * b * b;
        }
        if den == 0.0 {
            return Ok(if num == 0.0 { 0.0 } else { f64::INFINITY });
        }
        Ok((num / den).sqrt())
    }

    pub fn check_same_grid(&self, other: &TimeSeries) -> Result<()> {
        let same = self.len() == other.len()
            && (self.dt - other.dt).abs() <= 1e-12 * self.dt
            && (self.t0 - other.t0).abs() <= 1e-9 * self.dt.max(self.t0.abs() * 1e-3);
        if same {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "({}, {}, {}) vs ({}, {}, {})",
                self.t0,
                self.dt,
                self.len(),
                other.t0,
                other.dt,
                other.len()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn validates_construction() {
        assert!(TimeSeries::new(0.0, 0.0, vec![0.0, 1.0]).is_err());
        assert!(TimeSeries::new(0.0, -1.0, vec![0.0, 1.0]).is_err());
        assert!(TimeSeries::new(0.0, 0.1, vec![1.0]).is_err());
        let s = TimeSeries::new(1.0, 0.5, vec![0.0, 1.0, 4.0]).unwrap();
        assert_eq!(s.end(), 2.0);
    }

    #[test]
    fn interpolates_linearly() {
        let s = TimeSeries::new(1.0, 0.5, vec![0.0, 1.0, 4.0]).unwrap();
        assert_eq!(s.interpolate(1.0), Some(0.0));
        assert_eq!(s.interpolate(1.25), Some(0.5));
        assert_eq!(s.interpolate(2.0), Some(4.0));
        assert_eq!(s.interpolate(1.75), Some(2.5));
        assert_eq!(s.interpolate(0.9), None);
        assert_eq!(s.interpolate(2.1), None);
    }

    #[test]
    fn norms() {
        let s = TimeSeries::from_fn(0.0, 0.001, 1001, |t| -1.0 + 0.0 * t).unwrap();
        assert!((s.l1_norm() - 1.0).abs() < 1e-12);
        assert!((s.l2_norm() - 1.0).abs() < 1e-12);
        let r = TimeSeries::from_fn(0.0, 0.001, 1001, |_| -1.1).unwrap();
        assert!((r.relative_l2_error(&s).unwrap() - 0.1).abs() < 1e-12);
        let other = TimeSeries::from_fn(0.0, 0.002, 1001, |_| 0.0).unwrap();
        assert!(s.relative_l2_error(&other).is_err());
    }
}
