//! Spiral arcs of parabola spanning the normalized chord.
//!
//! The arc is the quadratic Bezier curve `A(1-t)^2 + 2P(1-t)t + Bt^2` with
//! `A = (-1, 0)`, `B = (1, 0)` and control point `P = (p, q)`. For a fixed
//! lense width `sigma` the admissible control points lie on an equilateral
//! hyperbola through `A` and `B`; along it `Q` is monotone in the polar angle
//! `xi` of the control point, and solving `Q(xi) = Q0` reduces to the
//! depressed quartic `theta^4 + 6 theta^2 + 8 Q1 theta - 3 = 0` in
//! `theta = tan xi`, whose admissible root has a closed form.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpiralError};
use crate::geom::{NormalizedProblem, Point};

/// Scaled quartic residual above which a solve is rejected.
const QUARTIC_RESIDUAL_LIMIT: f64 = 1e-8;

const Q1_LIMIT: f64 = 1e150;

/// Parabolic arc with control point `(p, q)`.
///
/// `1 + p` and `1 - p` are stored separately: when the control point sits
/// very close to a chord end they carry digits that `p` alone has lost, and
/// every quantity at that end depends on them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolicArc {
    pub p: f64,
    pub q: f64,
    pub one_plus_p: f64,
    pub one_minus_p: f64,
}

impl ParabolicArc {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Self::with_offsets(p, q, 1.0 + p, 1.0 - p)
    }

    /// Arc with `1 + p` and `1 - p` supplied by the caller, who may know
    /// them to higher relative accuracy.
    pub fn with_offsets(p: f64, q: f64, one_plus_p: f64, one_minus_p: f64) -> Result<Self> {
        let finite = [p, q, one_plus_p, one_minus_p]
            .iter()
            .all(|v| v.is_finite());
        if !finite || q == 0.0 {
            return Err(SpiralError::Domain(format!(
                "control point ({p}, {q}) does not define a parabolic arc"
            )));
        }
        Ok(Self {
            p,
            q,
            one_plus_p,
            one_minus_p,
        })
    }

    /// `|AP|`
    pub fn h1(&self) -> f64 {
        self.one_plus_p.hypot(self.q)
    }

    /// `|PB|`
    pub fn h2(&self) -> f64 {
        self.one_minus_p.hypot(self.q)
    }

    pub fn control_point(&self) -> Point {
        Point::new(self.p, self.q)
    }

    /// `(x + 1, 1 - x)` at `t`, without cancellation near either end.
    pub fn end_offsets(&self, t: f64) -> (f64, f64) {
        let u = 1.0 - t;
        (
            2.0 * t * (self.one_plus_p * u + t),
            2.0 * u * (self.one_minus_p * t + u),
        )
    }

    /// `(1 + z, 1 - z)` as complex numbers, `z` the point at `t`.
    pub fn anchored(&self, t: f64) -> (Complex64, Complex64) {
        let (from_a, to_b) = self.end_offsets(t);
        let y = 2.0 * self.q * t * (1.0 - t);
        (Complex64::new(from_a, y), Complex64::new(to_b, -y))
    }

    pub fn eval(&self, t: f64) -> Point {
        let u = 1.0 - t;
        let (from_a, to_b) = self.end_offsets(t);
        let x = if t < 0.5 { from_a - 1.0 } else { 1.0 - to_b };
        Point::new(x, 2.0 * self.q * t * u)
    }

    /// First derivative with respect to `t`.
    pub fn derivative(&self, t: f64) -> Point {
        let u = 1.0 - t;
        Point::new(
            2.0 * self.one_plus_p * u + 2.0 * self.one_minus_p * t,
            2.0 * self.q * (u - t),
        )
    }

    /// Second derivative, constant along the arc.
    pub fn second_derivative(&self) -> Point {
        Point::new(-4.0 * self.p, -4.0 * self.q)
    }

    /// Speed `g(t) = |z'(t)|`.
    pub fn speed(&self, t: f64) -> f64 {
        let d = self.derivative(t);
        d.x.hypot(d.y)
    }

    pub fn boundary_angles(&self) -> (f64, f64) {
        (
            self.q.atan2(self.one_plus_p),
            (-self.q).atan2(self.one_minus_p),
        )
    }

    pub fn boundary_curvatures(&self) -> (f64, f64) {
        (-self.q / self.h1().powi(3), -self.q / self.h2().powi(3))
    }

    /// `k(t) = -8q / g(t)^3`
    pub fn curvature(&self, t: f64) -> f64 {
        -8.0 * self.q / self.speed(t).powi(3)
    }

    /// Boundary tangents and curvatures as a normalized problem.
    pub fn boundary_data(&self) -> NormalizedProblem {
        let (alpha, beta) = self.boundary_angles();
        let (a, b) = self.boundary_curvatures();
        NormalizedProblem { alpha, beta, a, b }
    }

    /// `1 - p^2`
    fn one_minus_p2(&self) -> f64 {
        self.one_plus_p * self.one_minus_p
    }

    /// `(cos sigma, sin sigma)` from the control point alone.
    pub fn sigma_cos_sin(&self) -> (f64, f64) {
        let hh = self.h1() * self.h2();
        (
            (self.one_minus_p2() + self.q * self.q) / hh,
            -2.0 * self.p * self.q / hh,
        )
    }

    /// The invariant `Q` expressed through the control point.
    pub fn invariant_q(&self) -> f64 {
        let (p, q) = (self.p, self.q);
        let h1 = self.h1();
        let h2 = self.h2();
        0.5 + (q * q - self.one_minus_p2()) / (2.0 * h1 * h2)
            - q * q * (2.0 * p * p + 2.0 * q * q + 1.0) / (h1 * h2).powi(3)
    }

    pub fn is_spiral(&self) -> bool {
        // (r^2 + p)(r^2 - p) with r^2 +- p = q^2 + p (p +- 1)
        let q2 = self.q * self.q;
        (q2 + self.p * self.one_plus_p) * (q2 - self.p * self.one_minus_p) <= 0.0
    }
}

/// `F1(p, q) * F2(p, q)`: non-positive exactly when the parabola has no
/// vertex strictly inside the arc.
pub fn spirality(p: f64, q: f64) -> f64 {
    let r2 = p * p + q * q;
    (r2 + p) * (r2 - p)
}

pub fn is_spiral_control(p: f64, q: f64) -> bool {
    q != 0.0 && spirality(p, q) <= 0.0
}

pub fn eval_parabola(arc: &ParabolicArc, t: f64) -> Point {
    arc.eval(t)
}

pub fn boundary_angles(arc: &ParabolicArc) -> (f64, f64) {
    arc.boundary_angles()
}

pub fn boundary_curvatures(arc: &ParabolicArc) -> (f64, f64) {
    arc.boundary_curvatures()
}

pub fn parabola_curvature(arc: &ParabolicArc, t: f64) -> f64 {
    arc.curvature(t)
}

/// Polar radius of the hyperbola of control points with lense width
/// `sigma0`, at polar angle `xi`.
pub fn hyperbola_rho(xi: f64, sigma0: f64) -> Result<f64> {
    let radicand = sigma0.sin() / (sigma0 - 2.0 * xi).sin();
    if !(radicand > 0.0) || !radicand.is_finite() {
        return Err(SpiralError::Domain(format!(
            "xi = {xi} is off the hyperbola branch for sigma = {sigma0}"
        )));
    }
    Ok(radicand.sqrt())
}

/// `cos^3 s - 3/2 cos s + 1/2`
pub fn f2(sigma: f64) -> f64 {
    let c = sigma.cos();
    c * c * c - 1.5 * c + 0.5
}

/// `(tan^4 xi + 6 tan^2 xi - 3) / (8 tan xi)`
fn f1(xi: f64) -> Result<f64> {
    let (s, c) = xi.sin_cos();
    if s == 0.0 || c == 0.0 {
        return Err(SpiralError::Domain(format!("pole of Q(xi) at xi = {xi}")));
    }
    let th = s / c;
    let th2 = th * th;
    let v = (th2 * th2 + 6.0 * th2 - 3.0) / (8.0 * th);
    if !v.is_finite() {
        return Err(SpiralError::Domain(format!("pole of Q(xi) at xi = {xi}")));
    }
    Ok(v)
}

/// The invariant `Q` of the parabolic arc whose control point sits on the
/// `sigma0` hyperbola at polar angle `xi`.
pub fn q_of_xi(xi: f64, sigma0: f64) -> Result<f64> {
    Ok(f2(sigma0) - sigma0.sin().powi(3) * f1(xi)?)
}

/// Supremum of `Q` over spiral parabolic arcs with lense width `sigma0`.
pub fn q_max(sigma0: f64) -> Result<f64> {
    if !(sigma0 != 0.0 && sigma0.abs() < FRAC_PI_2) {
        return Err(SpiralError::Domain(format!(
            "Q_max needs 0 < |sigma| < pi/2, got {sigma0}"
        )));
    }
    let w = (0.5 * sigma0).tan().cbrt();
    let w2 = w * w;
    let w6 = w2 * w2 * w2;
    Ok(-w6 * (w2 + 2.0) / ((1.0 - w2) * (w2 + 1.0).powi(3)))
}

/// Intermediate quantities of the closed-form quartic solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticSolution {
    pub q1: f64,
    pub m: f64,
    pub n: f64,
    pub r1: f64,
    pub r2: f64,
    pub r12: f64,
    /// `tan xi0`
    pub theta0: f64,
    pub xi0: f64,
}

impl QuarticSolution {
    /// Solves `theta^4 + 6 theta^2 + 8 q1 theta - 3 = 0` for the root whose
    /// sign is opposite to `sigma0`.
    pub fn new(q1: f64, sigma0: f64) -> Self {
        let m = (1.0 + q1 * q1).cbrt();
        let n = (m * m + m + 1.0).sqrt();
        // sqrt(m - 1) cancels badly for small q1; |q1| / n is exact algebra
        let r1 = q1.abs() / n;
        let r2 = m * 3f64.sqrt() / (2.0 * n + m + 2.0).sqrt();
        let r12 = 3.0 / (2.0 * n + 2.0 * m + 1.0);
        let sign_sigma = sigma0.signum();
        let theta0 = if sigma0 * q1 < 0.0 {
            -r12 / (r1 + r2) * sign_sigma
        } else {
            -(r1 + r2) * sign_sigma
        };
        Self {
            q1,
            m,
            n,
            r1,
            r2,
            r12,
            theta0,
            xi0: theta0.atan(),
        }
    }

    pub fn residual(&self) -> f64 {
        quartic(self.theta0, self.q1)
    }

    /// Residual divided by the largest term magnitude, so it is comparable
    /// across the range of `q1`.
    pub fn scaled_residual(&self) -> f64 {
        let t = self.theta0;
        let t2 = t * t;
        let scale = (t2 * t2 + 6.0 * t2 + (8.0 * self.q1 * t).abs() + 3.0).max(1.0);
        self.residual().abs() / scale
    }
}

fn quartic(theta: f64, q1: f64) -> f64 {
    let t2 = theta * theta;
    t2 * t2 + 6.0 * t2 + 8.0 * q1 * theta - 3.0
}

/// `Q1 = cot sigma + (a + sin alpha)(b - sin beta) / sin^3 sigma`, the
/// reduced right-hand side of the quartic for a boundary problem.
pub fn reduced_q(problem: &NormalizedProblem) -> f64 {
    let sigma = problem.sigma();
    let s = sigma.sin();
    sigma.cos() / s + problem.curvature_product() / (s * s * s)
}

/// The two spiral parabolic arcs whose invariants equal `(q0, sigma0)`.
pub fn solve_control_points(
    q0: f64,
    sigma0: f64,
) -> Result<(ParabolicArc, ParabolicArc, QuarticSolution)> {
    check_applicable(q0, sigma0)?;
    let q1 = (q0 - f2(sigma0)) / sigma0.sin().powi(3);
    control_points_from_q1(q1, sigma0)
}

/// Same as [`solve_control_points`], with `Q1` taken from the boundary data
/// directly.
pub fn solve_for_problem(
    problem: &NormalizedProblem,
) -> Result<(ParabolicArc, ParabolicArc, QuarticSolution)> {
    let sigma0 = problem.sigma();
    let inv = crate::geom::invariants_of(problem);
    check_applicable(inv.q, sigma0)?;
    control_points_from_q1(reduced_q(problem), sigma0)
}

fn check_applicable(q0: f64, sigma0: f64) -> Result<()> {
    let bound = q_max(sigma0).map_err(|e| SpiralError::NotApplicable(e.to_string()))?;
    if !(q0 <= bound) {
        return Err(SpiralError::NotApplicable(format!(
            "Q = {q0} exceeds Q_max = {bound}"
        )));
    }
    Ok(())
}

fn control_points_from_q1(
    q1: f64,
    sigma0: f64,
) -> Result<(ParabolicArc, ParabolicArc, QuarticSolution)> {
    if !q1.is_finite() || q1.abs() > Q1_LIMIT {
        return Err(SpiralError::NotApplicable(format!(
            "Q1 = {q1} out of range"
        )));
    }
    let sol = QuarticSolution::new(q1, sigma0);
    if sol.scaled_residual() > QUARTIC_RESIDUAL_LIMIT {
        return Err(SpiralError::NotApplicable(format!(
            "quartic root {} failed verification (residual {})",
            sol.theta0,
            sol.residual()
        )));
    }
    // p^2 = rho(xi)^2 cos^2 xi = 1 / (1 - v) with cos and sin of 2 xi
    // written through tan xi
    let th = sol.theta0;
    let v = th * (th + 2.0 / sigma0.tan());
    if !(v < 1.0) {
        return Err(SpiralError::NotApplicable(format!(
            "root tan xi = {th} is off the hyperbola branch"
        )));
    }
    let g = (1.0 - v).sqrt();
    let p = 1.0 / g;
    // p - 1 and p + 1 without cancellation
    let above = v / (g * (1.0 + g));
    let below = (1.0 + g) / g;
    let first = ParabolicArc::with_offsets(p, th * p, below, -above)?;
    let second = ParabolicArc::with_offsets(-p, -th * p, -above, below)?;
    Ok((first, second, sol))
}
