//! The cylinder index set `R x S^1` and its product measure.
//!
//! Delivery period `d` of `H` maps to the angle `2*pi*d/H`, so the panel of
//! prices lives on the unit cylinder: time along the axis, periods around the
//! circle. The embedding metric has determinant one, which makes the
//! Riemannian measure the plain product of Lebesgue measure in time and
//! arc length on the circle. That measure is the intensity of every Levy
//! basis in this crate, because it is the invariant measure under the
//! isometry group (time translations and rotations) and therefore the one
//! choice compatible with a stationary basis.

use crate::error::{Error, Result};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Normalizes an angle into the parametrization domain `(0, 2*pi]`.
///
/// Idempotent: multiples of `2*pi` map to `2*pi`, not `0`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TWO_PI);
    if r == 0.0 {
        TWO_PI
    } else {
        r
    }
}

/// Unit circle parametrization `theta -> (cos theta, sin theta)`.
pub fn circle_param(theta: f64) -> (f64, f64) {
    (theta.cos(), theta.sin())
}

/// Shortest angular distance between two angles, in `[0, pi]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TWO_PI);
    d.min(TWO_PI - d)
}

/// A point on the cylinder surface: time in years, angle in `(0, 2*pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPoint {
    pub t: f64,
    theta: f64,
}

impl CylinderPoint {
    pub fn new(t: f64, theta: f64) -> Self {
        Self {
            t,
            theta: normalize_angle(theta),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The point's circle coordinate embedded in the plane.
    pub fn position(&self) -> (f64, f64) {
        circle_param(self.theta)
    }

    /// Maps delivery period `d` of `H` per day onto the circle.
    pub fn from_delivery_period(t: f64, d: usize, periods_per_day: usize) -> Result<Self> {
        if d == 0 || d > periods_per_day {
            return Err(Error::invalid(format!(
                "delivery period {d} outside 1..={periods_per_day}"
            )));
        }
        Ok(Self::new(t, TWO_PI * d as f64 / periods_per_day as f64))
    }
}

/// An axis-aligned patch `[t_lo, t_hi] x [theta_lo, theta_hi]` on the
/// cylinder, the discretization cell of the simulation scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPatch {
    pub t_lo: f64,
    pub t_hi: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

impl CylinderPatch {
    pub fn new(t_lo: f64, t_hi: f64, theta_lo: f64, theta_hi: f64) -> Result<Self> {
        if !(t_lo <= t_hi) {
            return Err(Error::invalid(format!(
                "patch time bounds out of order: [{t_lo}, {t_hi}]"
            )));
        }
        let extent = theta_hi - theta_lo;
        if !(0.0..=TWO_PI).contains(&extent) {
            return Err(Error::invalid(format!(
                "patch angular extent {extent} outside [0, 2*pi]"
            )));
        }
        Ok(Self {
            t_lo,
            t_hi,
            theta_lo,
            theta_hi,
        })
    }
}

/// Area of a patch under the cylinder's Riemannian measure.
///
/// The metric determinant is one, so this is the product of the time and
/// angular extents. Degenerate patches have area zero.
pub fn riemannian_area(patch: &CylinderPatch) -> f64 {
    (patch.t_hi - patch.t_lo) * (patch.theta_hi - patch.theta_lo)
}

/// A finite union of disjoint half-open angular intervals `(lo, hi]` within
/// `(0, 2*pi]`. Intervals given across the `2*pi` seam are split.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSet {
    intervals: Vec<(f64, f64)>,
}

impl AngularSet {
    /// Builds a set from (possibly wrapping) intervals `(lo, hi]`.
    ///
    /// A pair with `lo >= hi` after normalization wraps through `2*pi` and is
    /// split into two pieces. Overlapping input intervals are rejected.
    pub fn new(intervals: &[(f64, f64)]) -> Result<Self> {
        let mut pieces: Vec<(f64, f64)> = Vec::new();
        for &(lo, hi) in intervals {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::invalid("angular interval bounds must be finite"));
            }
            if (hi - lo).abs() >= TWO_PI - 1e-12 {
                pieces.push((0.0, TWO_PI));
                continue;
            }
            let lo_n = normalize_angle(lo);
            let hi_n = normalize_angle(hi);
            // lo is an open endpoint: 2*pi as a lower bound means 0.
            let lo_n = if lo_n == TWO_PI { 0.0 } else { lo_n };
            if lo_n < hi_n {
                pieces.push((lo_n, hi_n));
            } else {
                pieces.push((lo_n, TWO_PI));
                pieces.push((0.0, hi_n));
            }
        }
        pieces.retain(|(lo, hi)| hi > lo);
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pieces.windows(2) {
            if w[1].0 < w[0].1 - 1e-14 {
                return Err(Error::invalid(format!(
                    "angular intervals overlap near theta={}",
                    w[1].0
                )));
            }
        }
        Ok(Self { intervals: pieces })
    }

    /// The full circle `(0, 2*pi]`.
    pub fn full_circle() -> Self {
        Self {
            intervals: vec![(0.0, TWO_PI)],
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total angular measure, at most `2*pi`.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        let t = normalize_angle(theta);
        self.intervals
            .iter()
            .any(|&(lo, hi)| t > lo && t <= hi || (lo == 0.0 && t == TWO_PI && hi == TWO_PI))
    }

    /// Complement within the circle.
    pub fn complement(&self) -> Self {
        let mut gaps = Vec::new();
        let mut cursor = 0.0;
        for &(lo, hi) in &self.intervals {
            if lo > cursor {
                gaps.push((cursor, lo));
            }
            cursor = cursor.max(hi);
        }
        if cursor < TWO_PI {
            gaps.push((cursor, TWO_PI));
        }
        Self { intervals: gaps }
    }

    /// Integrates `f` over the set with a composite Simpson rule per
    /// interval.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, panels_per_interval: usize) -> f64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| crate::numerics::integrate_interval(&f, lo, hi, panels_per_interval))
            .sum()
    }
}
