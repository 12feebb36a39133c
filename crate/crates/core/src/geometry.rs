#[cfg(not(feature = "std"))]
use num_traits::Float;

/// A point or displacement in 3-space.
pub type Vec3 = [f64; 3];

#[inline]
pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn distance(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

/// Two unit vectors completing `axis` (assumed unit) to a right-handed frame.
pub fn orthonormal_frame(axis: Vec3) -> (Vec3, Vec3) {
    let helper = if axis[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let e1 = {
        let p = sub(helper, scale(dot(helper, axis), axis));
        scale(1.0 / norm(p), p)
    };
    let e2 = [
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    (e1, e2)
}

/// Closed ball `{y : |y - center| <= radius}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ball {
    pub center: Vec3,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec3, radius: f64) -> Self {
        Ball { center, radius }
    }

    pub fn contains(&self, y: Vec3) -> bool {
        distance(y, self.center) <= self.radius
    }

    /// Distance from `x` to the nearest point of the ball (0 inside).
    pub fn min_distance(&self, x: Vec3) -> f64 {
        (distance(x, self.center) - self.radius).max(0.0)
    }

    /// Distance from `x` to the farthest point of the ball.
    pub fn max_distance(&self, x: Vec3) -> f64 {
        distance(x, self.center) + self.radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_orthonormal() {
        for axis in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.6, 0.0, 0.8]] {
            let (e1, e2) = orthonormal_frame(axis);
            assert!((norm(e1) - 1.0).abs() < 1e-15);
            assert!((norm(e2) - 1.0).abs() < 1e-15);
            assert!(dot(e1, axis).abs() < 1e-15);
            assert!(dot(e2, axis).abs() < 1e-15);
            assert!(dot(e1, e2).abs() < 1e-15);
        }
    }

    #[test]
    fn ball_distances() {
        let ball = Ball::new([1.0, 0.0, 0.0], 0.5);
        assert_eq!(ball.min_distance([1.2, 0.0, 0.0]), 0.0);
        assert!((ball.min_distance([3.0, 0.0, 0.0]) - 1.5).abs() < 1e-15);
        assert!((ball.max_distance([3.0, 0.0, 0.0]) - 2.5).abs() < 1e-15);
    }
}
