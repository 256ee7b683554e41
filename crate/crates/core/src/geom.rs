//! Curvature elements, the chord frame, and the inversive invariants of a
//! pair of boundary circles.
//!
//! A boundary-value problem is given by two curvature elements (point,
//! tangent angle, signed curvature). Mapping the chord onto the segment
//! `[-1, 1]` of the x-axis leaves four dimensionless numbers: the tangent
//! angles `alpha`, `beta` measured from the chord and the normalized
//! curvatures `a`, `b`. Two quantities of that quadruple survive every
//! Moebius map fixing the chord endpoints, `Q` and `sigma = alpha + beta`,
//! and they decide whether a spiral exists at all.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpiralError};
use crate::parabola;

/// `|Q|` at or below this is treated as tangency of the boundary circles.
pub const BIARC_TOLERANCE: f64 = 1e-9;

/// Relative chord length below which the endpoints are considered coincident.
pub const DEGENERATE_CHORD: f64 = 1e-12;

/// Angles this close to `+-pi` are snapped onto the half-interval that the
/// monotonicity type of the curvature prescribes.
const HALF_TURN_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }
}

impl From<Point> for Complex64 {
    fn from(p: Point) -> Self {
        Complex64::new(p.x, p.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// A point with its tangent direction and signed curvature, i.e. an oriented
/// circle of curvature through the point. `k == 0` is a straight line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureElement {
    pub x: f64,
    pub y: f64,
    /// Tangent angle in radians.
    pub tau: f64,
    /// Signed curvature, positive when turning counter-clockwise.
    pub k: f64,
}

impl CurvatureElement {
    pub const fn new(x: f64, y: f64, tau: f64, k: f64) -> Self {
        Self { x, y, tau, k }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }

    /// Center of the circle of curvature, `None` for a straight line.
    pub fn center_of_curvature(&self) -> Option<Point> {
        if self.k == 0.0 {
            return None;
        }
        let r = 1.0 / self.k;
        Some(Point::new(
            self.x - r * self.tau.sin(),
            self.y + r * self.tau.cos(),
        ))
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.tau.is_finite() && self.k.is_finite()
    }
}

/// Similarity that carries the chord of a problem onto `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordFrame {
    /// Half the chord length.
    pub c: f64,
    /// Direction of the chord.
    pub mu: f64,
    /// Midpoint of the chord.
    pub origin: Point,
}

impl ChordFrame {
    pub const IDENTITY: ChordFrame = ChordFrame {
        c: 1.0,
        mu: 0.0,
        origin: Point::new(0.0, 0.0),
    };

    pub fn from_endpoints(start: Point, end: Point) -> Result<Self> {
        let dx = end.x - start.x;
        let dy = end.y - start.y;
        let len = dx.hypot(dy);
        let scale = 1f64.max(start.x.hypot(start.y)).max(end.x.hypot(end.y));
        if !(len > DEGENERATE_CHORD * scale) {
            return Err(SpiralError::DegenerateChord(len));
        }
        Ok(Self {
            c: 0.5 * len,
            mu: dy.atan2(dx),
            origin: Point::new(0.5 * (start.x + end.x), 0.5 * (start.y + end.y)),
        })
    }

    fn rotation(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.mu)
    }

    /// World coordinates to chord coordinates.
    pub fn to_frame(&self, p: Point) -> Point {
        let z = (Complex64::from(p) - Complex64::from(self.origin)) / self.rotation() / self.c;
        z.into()
    }

    /// Chord coordinates back to world coordinates: rotate by `mu`, scale by
    /// `c`, translate to the chord midpoint.
    pub fn map_back(&self, p: Point) -> Point {
        let z = Complex64::from(p) * self.rotation() * self.c + Complex64::from(self.origin);
        z.into()
    }

    pub fn map_back_complex(&self, z: Complex64) -> Complex64 {
        z * self.rotation() * self.c + Complex64::from(self.origin)
    }

    /// Lifts a curvature element expressed in chord coordinates.
    pub fn map_element_back(&self, e: &CurvatureElement) -> CurvatureElement {
        let p = self.map_back(e.point());
        CurvatureElement::new(p.x, p.y, e.tau + self.mu, e.k / self.c)
    }

    pub fn element_to_frame(&self, e: &CurvatureElement) -> CurvatureElement {
        let p = self.to_frame(e.point());
        CurvatureElement::new(p.x, p.y, e.tau - self.mu, e.k * self.c)
    }
}

/// Boundary data on the normalized chord: element `(-1, 0, alpha, a)` at the
/// start and `(1, 0, beta, b)` at the end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedProblem {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
}

impl NormalizedProblem {
    /// Builds a problem with canonical angle representatives.
    pub fn new(alpha: f64, beta: f64, a: f64, b: f64) -> Self {
        Self { alpha, beta, a, b }.canonical()
    }

    /// Angles brought to `(-pi, pi]`, or to `[-pi, pi)` when the curvature
    /// decreases (`a > b`).
    pub fn canonical(&self) -> Self {
        let decreasing = self.a > self.b;
        Self {
            alpha: canonical_angle(self.alpha, decreasing),
            beta: canonical_angle(self.beta, decreasing),
            a: self.a,
            b: self.b,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn start(&self) -> CurvatureElement {
        CurvatureElement::new(-1.0, 0.0, self.alpha, self.a)
    }

    pub fn end(&self) -> CurvatureElement {
        CurvatureElement::new(1.0, 0.0, self.beta, self.b)
    }

    /// `(a + sin alpha)(b - sin beta)`, the part of `Q` that the Moebius
    /// parameters split between the two endpoints.
    pub fn curvature_product(&self) -> f64 {
        (self.a + self.alpha.sin()) * (self.b - self.beta.sin())
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Wraps into `(-pi, pi]`, or `[-pi, pi)` for decreasing curvature.
pub fn canonical_angle(angle: f64, decreasing: bool) -> f64 {
    let w = wrap_angle(angle);
    if decreasing {
        if w >= PI - HALF_TURN_SNAP {
            return -PI;
        }
    } else if w <= -PI + HALF_TURN_SNAP {
        return PI;
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantPair {
    pub q: f64,
    pub sigma: f64,
}

/// Maps a problem to chord coordinates.
pub fn normalize_to_chord(
    start: &CurvatureElement,
    end: &CurvatureElement,
) -> Result<(ChordFrame, NormalizedProblem)> {
    if !start.is_finite() || !end.is_finite() {
        return Err(SpiralError::Domain("non-finite curvature element".into()));
    }
    let frame = ChordFrame::from_endpoints(start.point(), end.point())?;
    let problem = NormalizedProblem::new(
        start.tau - frame.mu,
        end.tau - frame.mu,
        start.k * frame.c,
        end.k * frame.c,
    );
    Ok((frame, problem))
}

pub fn map_back(frame: &ChordFrame, point: Point) -> Point {
    frame.map_back(point)
}

pub fn invariants_of(problem: &NormalizedProblem) -> InvariantPair {
    let sigma = problem.sigma();
    let half = (0.5 * sigma).sin();
    InvariantPair {
        q: problem.curvature_product() + half * half,
        sigma,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Solvability {
    /// `Q > 0`: no spiral matches the boundary data.
    NoSpiral,
    /// `Q = 0`: the biarc is the only spiral.
    BiarcOnly,
    /// Spirals exist but none of them is short.
    NoShortSpiral,
    /// A short spiral exists but lies outside the reach of parabolic sources.
    MethodNotApplicable,
    Solvable,
}

impl Solvability {
    pub fn describe(self) -> &'static str {
        match self {
            Solvability::NoSpiral => "no such spiral exists",
            Solvability::BiarcOnly => "the biarc is the unique spiral",
            Solvability::NoShortSpiral => "no short spiral exists",
            Solvability::MethodNotApplicable => {
                "boundary circles too close to tangency or lense too wide"
            }
            Solvability::Solvable => "solvable",
        }
    }
}

impl std::fmt::Display for Solvability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Solvability::NoSpiral => "NoSpiral",
            Solvability::BiarcOnly => "BiarcOnly",
            Solvability::NoShortSpiral => "NoShortSpiral",
            Solvability::MethodNotApplicable => "MethodNotApplicable",
            Solvability::Solvable => "Solvable",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityClass {
    pub tag: Solvability,
    pub invariants: InvariantPair,
    /// Applicability bound, defined only for `0 < |sigma| < pi/2`.
    pub q_max: Option<f64>,
}

impl SolvabilityClass {
    pub fn is_solvable(&self) -> bool {
        self.tag == Solvability::Solvable
    }
}

/// Short-spiral condition: `sign(alpha + beta) = sign(b - a) != 0`.
pub fn short_spiral_condition(problem: &NormalizedProblem) -> bool {
    let dk = problem.b - problem.a;
    let sigma = problem.sigma();
    dk != 0.0 && sigma != 0.0 && (dk > 0.0) == (sigma > 0.0)
}

pub fn classify(problem: &NormalizedProblem) -> SolvabilityClass {
    let problem = problem.canonical();
    let invariants = invariants_of(&problem);
    let sigma = invariants.sigma;
    let q_max = parabola::q_max(sigma).ok();
    let tag = if invariants.q > BIARC_TOLERANCE {
        Solvability::NoSpiral
    } else if invariants.q.abs() <= BIARC_TOLERANCE {
        Solvability::BiarcOnly
    } else if !short_spiral_condition(&problem) {
        Solvability::NoShortSpiral
    } else if sigma.abs() >= FRAC_PI_2 || q_max.is_none_or(|qm| invariants.q > qm) {
        Solvability::MethodNotApplicable
    } else {
        Solvability::Solvable
    };
    SolvabilityClass {
        tag,
        invariants,
        q_max,
    }
}
