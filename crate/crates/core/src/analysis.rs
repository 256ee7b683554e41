//! Measurements on constructed curves: curvature against arc length,
//! monotonicity, inflection, and containment in the lense.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geom::{wrap_angle, NormalizedProblem, Point};
use crate::quad;
use crate::solver::RationalSpiralArc;

/// Relative tolerance of the arc-length quadrature.
pub const ARC_LENGTH_TOLERANCE: f64 = 1e-10;

/// Distance slack for lense membership.
pub const LENSE_TOLERANCE: f64 = 1e-9;

/// Samples used by [`contains_in_lense`].
pub const LENSE_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub t: f64,
    /// Arc length from the start of the curve.
    pub s: f64,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Invalid,
}

impl Monotonicity {
    pub fn sign(self) -> i8 {
        match self {
            Monotonicity::Increasing => 1,
            Monotonicity::Decreasing => -1,
            Monotonicity::Invalid => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureProfile {
    pub samples: Vec<CurvatureSample>,
    pub monotone_direction: Monotonicity,
}

impl CurvatureProfile {
    pub fn total_length(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.s)
    }

    pub fn curvatures(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.k)
    }
}

/// Arc length of `curve` between two parameter values.
pub fn arc_length(curve: &RationalSpiralArc, t0: f64, t1: f64) -> f64 {
    quad::integrate(|t| curve.speed(t), t0, t1, 0.0, ARC_LENGTH_TOLERANCE)
}

/// `n` samples uniform in `t`, curvature from exact derivatives, arc length
/// accumulated interval by interval.
pub fn curvature_profile(curve: &RationalSpiralArc, n: usize) -> CurvatureProfile {
    let n = n.max(2);
    let mut samples = Vec::with_capacity(n);
    let mut s = 0.0;
    let mut prev_t = 0.0;
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        if i > 0 {
            s += arc_length(curve, prev_t, t);
        }
        samples.push(CurvatureSample {
            t,
            s,
            k: curve.curvature(t),
        });
        prev_t = t;
    }
    let max_k = samples.iter().fold(0.0f64, |m, x| m.max(x.k.abs()));
    let monotone_direction = monotone_direction(
        &samples.iter().map(|x| x.k).collect::<Vec<_>>(),
        1e-12 * max_k,
    );
    CurvatureProfile {
        samples,
        monotone_direction,
    }
}

/// Direction of a strictly monotone sequence. The first and last steps may
/// be flat up to `slack`, which admits a vertex at an endpoint.
pub fn monotone_direction(ks: &[f64], slack: f64) -> Monotonicity {
    if ks.len() < 2 {
        return Monotonicity::Invalid;
    }
    let direction = ks[ks.len() - 1] - ks[0];
    if direction == 0.0 {
        return Monotonicity::Invalid;
    }
    let steps = ks.len() - 1;
    let ok = ks.windows(2).enumerate().all(|(i, w)| {
        let d = (w[1] - w[0]) * direction.signum();
        let outermost = i == 0 || i == steps - 1;
        d > 0.0 || (outermost && d.abs() <= slack)
    });
    match (ok, direction > 0.0) {
        (false, _) => Monotonicity::Invalid,
        (true, true) => Monotonicity::Increasing,
        (true, false) => Monotonicity::Decreasing,
    }
}

pub fn assert_monotone(profile: &CurvatureProfile, slack: f64) -> bool {
    let ks: Vec<f64> = profile.curvatures().collect();
    monotone_direction(&ks, slack) != Monotonicity::Invalid
}

/// Parameter of the unique curvature zero, when the boundary curvatures
/// have opposite signs (or one of them vanishes).
pub fn find_inflection(curve: &RationalSpiralArc) -> Option<f64> {
    let k0 = curve.curvature_normalized(0.0);
    let k1 = curve.curvature_normalized(1.0);
    if k0 == 0.0 {
        return Some(0.0);
    }
    if k1 == 0.0 {
        return Some(1.0);
    }
    if k0.signum() == k1.signum() {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let km = curve.curvature_normalized(mid);
        if km == 0.0 {
            return Some(mid);
        }
        if km.signum() == k0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Circular arc from `(-1, 0)` to `(1, 0)` leaving the start at angle
/// `tangent`. Its curvature is `-sin(tangent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordArc {
    pub tangent: f64,
}

impl ChordArc {
    pub fn curvature(&self) -> f64 {
        -self.tangent.sin()
    }

    /// Point at parameter `u` in `[0, 1]` along the arc.
    pub fn eval(&self, u: f64) -> Point {
        let k = self.curvature();
        let turn = -2.0 * self.tangent;
        // chord of length 2 subtends the turning angle; straight when k = 0
        let len = if k.abs() < 1e-12 { 2.0 } else { turn / k };
        let s = u * len;
        let z = if k.abs() < 1e-12 {
            Complex64::from_polar(s, self.tangent)
        } else {
            Complex64::i() / k
                * Complex64::from_polar(1.0, self.tangent)
                * (1.0 - Complex64::from_polar(1.0, k * s))
        };
        (Complex64::new(-1.0, 0.0) + z).into()
    }
}

/// Region between the two circular arcs through the chord ends that share
/// the boundary tangents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lense {
    /// Arc tangent to the curve at the start.
    pub first: ChordArc,
    /// Arc tangent to the curve at the end; its start tangent is `-beta`.
    pub second: ChordArc,
    /// Signed angular width `alpha + beta`.
    pub sigma: f64,
}

pub fn lense_of(problem: &NormalizedProblem) -> Lense {
    Lense {
        first: ChordArc {
            tangent: problem.alpha,
        },
        second: ChordArc {
            tangent: -problem.beta,
        },
        sigma: problem.alpha + problem.beta,
    }
}

/// Start tangent of the circular arc from `-1` through `z` to `1`.
fn pencil_angle(z: Complex64) -> f64 {
    ((1.0 + z) / (1.0 - z)).arg()
}

impl Lense {
    /// First-order signed distance of `z` to the lense: positive outside,
    /// non-positive inside.
    ///
    /// Circles through both chord ends are the level sets of the start
    /// tangent `theta(z)`. The lense is the band of `theta` between
    /// `-beta` and `alpha`; the angular excess is scaled by `|1 - z^2| / 2`,
    /// the inverse gradient of `theta`.
    pub fn excess(&self, p: Point) -> f64 {
        let z = Complex64::from(p);
        let scale = 0.5 * (1.0 - z * z).norm();
        if scale == 0.0 {
            return 0.0;
        }
        let lo = self.second.tangent;
        let offset = wrap_angle(pencil_angle(z) - lo);
        let width = self.sigma;
        let angular = if width >= 0.0 {
            if offset < 0.0 {
                -offset
            } else {
                (offset - width).max(-offset.min(width - offset))
            }
        } else if offset > 0.0 {
            offset
        } else {
            (width - offset).max(-(-offset).min(offset - width))
        };
        angular * scale
    }

    pub fn contains(&self, p: Point, tolerance: f64) -> bool {
        self.excess(p) <= tolerance
    }
}

pub fn contains_in_lense(curve: &RationalSpiralArc, lense: &Lense) -> bool {
    (0..LENSE_SAMPLES).all(|i| {
        let t = i as f64 / (LENSE_SAMPLES - 1) as f64;
        lense.contains(curve.eval_normalized(t), LENSE_TOLERANCE)
    })
}
