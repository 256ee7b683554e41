//! End-to-end construction of short spiral arcs between two curvature
//! elements.
//!
//! 1. Move the problem to chord coordinates.
//! 2. Classify it by its invariants.
//! 3. Solve for the two spiral parabolic arcs with the same invariants.
//! 4. Find the Moebius transform carrying each parabola's boundary circles
//!    onto the requested ones.
//! 5. Map back to world coordinates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpiralError};
use crate::geom::{
    classify, normalize_to_chord, ChordFrame, CurvatureElement, InvariantPair, NormalizedProblem,
    Point, SolvabilityClass,
};
use crate::moebius::{
    eval_rational, expand_rational_coeffs, params_from_pairs, MoebiusParams, RationalCoeffs,
};
use crate::parabola::{solve_for_problem, ParabolicArc, QuarticSolution};

/// Samples used for the fairness hint.
const FAIRNESS_SAMPLES: usize = 257;

/// One solution: a parabolic arc, the transform applied to it, and the
/// similarity back to world coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalSpiralArc {
    pub frame: ChordFrame,
    pub arc: ParabolicArc,
    pub params: MoebiusParams,
    pub coeffs: RationalCoeffs,
    /// 1 for the control point on the root `xi0`, 2 for its reflection
    /// through the origin.
    pub solution_index: u8,
}

/// Position and first two parametric derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub point: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    /// Signed curvature, in the units of `point`.
    pub curvature: f64,
}

impl Jet {
    pub fn tangent_angle(&self) -> f64 {
        self.d1.arg()
    }

    pub fn speed(&self) -> f64 {
        self.d1.norm()
    }

    pub fn curvature(&self) -> f64 {
        self.curvature
    }
}

impl RationalSpiralArc {
    pub fn new(
        frame: ChordFrame,
        arc: ParabolicArc,
        params: MoebiusParams,
        solution_index: u8,
    ) -> Self {
        Self {
            frame,
            arc,
            params,
            coeffs: expand_rational_coeffs(&arc, &params),
            solution_index,
        }
    }

    /// Point in chord coordinates.
    pub fn eval_normalized(&self, t: f64) -> Point {
        eval_rational(&self.arc, &self.params, t)
    }

    pub fn eval(&self, t: f64) -> Point {
        self.frame.map_back(self.eval_normalized(t))
    }

    /// Analytic derivatives in chord coordinates, via the chain rule through
    /// the transform.
    pub fn jet_normalized(&self, t: f64) -> Jet {
        let (plus, minus) = self.arc.anchored(t);
        let dz = Complex64::from(self.arc.derivative(t));
        let ddz = Complex64::from(self.arc.second_derivative());
        let image = self.params.push_forward_anchored(plus, minus, dz, ddz);
        Jet {
            point: image.point,
            d1: image.d1,
            d2: image.d2,
            curvature: image.curvature,
        }
    }

    pub fn jet(&self, t: f64) -> Jet {
        let j = self.jet_normalized(t);
        let rot = Complex64::from_polar(self.frame.c, self.frame.mu);
        Jet {
            point: self.frame.map_back_complex(j.point),
            d1: j.d1 * rot,
            d2: j.d2 * rot,
            curvature: j.curvature / self.frame.c,
        }
    }

    /// Curvature in chord units (times `c`).
    pub fn curvature_normalized(&self, t: f64) -> f64 {
        self.jet_normalized(t).curvature()
    }

    pub fn curvature(&self, t: f64) -> f64 {
        self.curvature_normalized(t) / self.frame.c
    }

    /// Speed `|dw/dt|` in world units.
    pub fn speed(&self, t: f64) -> f64 {
        self.jet_normalized(t).speed() * self.frame.c
    }

    /// Curvature element of the curve at `t`, in world coordinates.
    pub fn element(&self, t: f64) -> CurvatureElement {
        let j = self.jet_normalized(t);
        let p = self.frame.map_back(j.point.into());
        CurvatureElement::new(
            p.x,
            p.y,
            j.tangent_angle() + self.frame.mu,
            j.curvature() / self.frame.c,
        )
    }

    /// Largest `|dk/ds|` over a uniform sample, a rough fairness measure.
    pub fn max_curvature_rate(&self) -> f64 {
        let n = FAIRNESS_SAMPLES;
        let mut prev = self.jet(0.0);
        let mut worst: f64 = 0.0;
        for i in 1..n {
            let j = self.jet(i as f64 / (n - 1) as f64);
            let ds = (j.point - prev.point).norm();
            if ds > 0.0 {
                worst = worst.max((j.curvature() - prev.curvature()).abs() / ds);
            }
            prev = j;
        }
        worst
    }

    /// The parabola's control polygon in world coordinates.
    pub fn control_polygon(&self) -> [Point; 3] {
        [
            self.frame.map_back(Point::new(-1.0, 0.0)),
            self.frame.map_back(self.arc.control_point()),
            self.frame.map_back(Point::new(1.0, 0.0)),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub invariants: InvariantPair,
    pub q_max: Option<f64>,
    pub quartic: Option<QuarticSolution>,
    pub quartic_residual: Option<f64>,
    /// `max |dk/ds|` per solution, same order as the solutions.
    pub curvature_rate: Vec<f64>,
    /// Index into the solutions of the fairer curve, if any. Informational.
    pub fairer: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub class: SolvabilityClass,
    pub frame: ChordFrame,
    pub problem: NormalizedProblem,
    pub solutions: Vec<RationalSpiralArc>,
    pub diagnostics: Diagnostics,
}

impl SolveOutcome {
    pub fn is_solvable(&self) -> bool {
        self.class.is_solvable()
    }
}

/// Spiral arcs from `start` to `end` matching position, tangent, and
/// curvature at both ends. Failures of the boundary data are reported in
/// the outcome's class; only degenerate or non-finite input is an error.
pub fn solve_g2_hermite(start: &CurvatureElement, end: &CurvatureElement) -> Result<SolveOutcome> {
    let (frame, problem) = normalize_to_chord(start, end)?;
    let class = classify(&problem);
    let mut diagnostics = Diagnostics {
        invariants: class.invariants,
        q_max: class.q_max,
        quartic: None,
        quartic_residual: None,
        curvature_rate: Vec::new(),
        fairer: None,
    };
    let mut outcome = SolveOutcome {
        class,
        frame,
        problem,
        solutions: Vec::new(),
        diagnostics: diagnostics.clone(),
    };
    if !class.is_solvable() {
        return Ok(outcome);
    }

    let (first, second, quartic) = solve_for_problem(&problem)?;
    let mut solutions = Vec::with_capacity(2);
    for (index, arc) in [(1u8, first), (2u8, second)] {
        let params = params_from_pairs(&arc.boundary_data(), &problem)?;
        solutions.push(RationalSpiralArc::new(frame, arc, params, index));
    }
    diagnostics.quartic = Some(quartic);
    diagnostics.quartic_residual = Some(quartic.residual());
    diagnostics.curvature_rate = solutions.iter().map(|s| s.max_curvature_rate()).collect();
    diagnostics.fairer = match diagnostics.curvature_rate[..] {
        [r1, r2] if r1 <= r2 => Some(0),
        [_, _] => Some(1),
        _ => None,
    };
    outcome.solutions = solutions;
    outcome.diagnostics = diagnostics;
    Ok(outcome)
}

/// Splits a problem between two concentric circles at the polar halfway
/// point, on the intermediate circle of radius `sqrt(R_A R_B)`. With that
/// radius the two halves are similar to each other.
///
/// The polar sweep from A to B, taken in the direction of travel, lies in
/// `(0, 2 pi]` plus `extra_turns` full turns.
pub fn subdivide_concentric(
    start: &CurvatureElement,
    end: &CurvatureElement,
    center: Point,
    extra_turns: u32,
) -> Result<Vec<(CurvatureElement, CurvatureElement)>> {
    let ra = start.point().distance(center);
    let rb = end.point().distance(center);
    let scale = ra.max(rb);
    let tol = 1e-9 * scale.max(1.0);
    for (name, e) in [("start", start), ("end", end)] {
        match e.center_of_curvature() {
            Some(c) if c.distance(center) <= tol => {}
            _ => {
                return Err(SpiralError::InvalidGeometry(format!(
                    "{name} element is not on a circle about ({}, {})",
                    center.x, center.y
                )))
            }
        }
    }
    if start.k.signum() != end.k.signum() {
        return Err(SpiralError::InvalidGeometry(
            "boundary circles are traversed in opposite directions".into(),
        ));
    }
    let dir = start.k.signum();
    let phi_a = (start.y - center.y).atan2(start.x - center.x);
    let phi_b = (end.y - center.y).atan2(end.x - center.x);
    // polar sweep from A to B in the direction of travel, in (0, 2 pi]
    let mut sweep = (dir * (phi_b - phi_a)).rem_euclid(2.0 * PI);
    if sweep == 0.0 {
        sweep = 2.0 * PI;
    }
    sweep += 2.0 * PI * extra_turns as f64;
    let phi_m = phi_a + dir * 0.5 * sweep;
    let rm = (ra * rb).sqrt();
    let mid = CurvatureElement::new(
        center.x + rm * phi_m.cos(),
        center.y + rm * phi_m.sin(),
        phi_m + dir * 0.5 * PI,
        dir / rm,
    );
    Ok(vec![(*start, mid), (mid, *end)])
}

/// Solves every consecutive pair of elements independently, in order.
pub fn solve_chain(elements: &[CurvatureElement]) -> Result<Vec<Result<SolveOutcome>>> {
    if elements.len() < 2 {
        return Err(SpiralError::InvalidGeometry(format!(
            "a chain needs at least two elements, got {}",
            elements.len()
        )));
    }
    Ok(elements
        .par_windows(2)
        .map(|w| solve_g2_hermite(&w[0], &w[1]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Solvability;

    const DEG: f64 = PI / 180.0;

    fn worked_example() -> (CurvatureElement, CurvatureElement) {
        (
            CurvatureElement::new(-1.0, 0.0, -PI, 2.5),
            CurvatureElement::new(1.0, 0.0, 120.0 * DEG, 0.5),
        )
    }

    #[test]
    fn solves_worked_example() {
        let (s, e) = worked_example();
        let out = solve_g2_hermite(&s, &e).unwrap();
        assert_eq!(out.class.tag, Solvability::Solvable);
        assert_eq!(out.solutions.len(), 2);
        let sol = &out.solutions[1];
        assert_eq!(sol.solution_index, 2);
        assert!((sol.arc.p + 0.8845).abs() < 5e-4 && (sol.arc.q + 0.3033).abs() < 5e-4);
        let z0 = sol.params.z0().unwrap();
        assert!((z0.re - 1.0296).abs() < 5e-4 && (z0.im + 0.6727).abs() < 5e-4);
    }

    #[test]
    fn unsolvable_outcomes_have_no_solutions() {
        let s = CurvatureElement::new(-1.0, 0.0, 0.5, 0.0);
        let e = CurvatureElement::new(1.0, 0.0, -0.5, 0.0);
        let out = solve_g2_hermite(&s, &e).unwrap();
        assert_eq!(out.class.tag, Solvability::NoSpiral);
        assert!(out.solutions.is_empty());
    }

    #[test]
    fn endpoint_elements_are_reproduced() {
        // the worked example scaled by 2.5, turned by 0.7 and shifted
        let (c, mu) = (2.5, 0.7);
        let frame = ChordFrame {
            c,
            mu,
            origin: Point::new(3.0, -1.0),
        };
        let (s, e) = worked_example();
        let s = frame.map_element_back(&s);
        let e = frame.map_element_back(&e);
        let out = solve_g2_hermite(&s, &e).unwrap();
        assert!(out.is_solvable(), "{:?}", out.class);
        for sol in &out.solutions {
            for (t, want) in [(0.0, s), (1.0, e)] {
                let got = sol.element(t);
                assert!(got.point().distance(want.point()) < 1e-9);
                assert!(crate::geom::wrap_angle(got.tau - want.tau).abs() < 1e-9);
                assert!((got.k - want.k).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn concentric_split_uses_geometric_mean() {
        let s = CurvatureElement::new(1.0, 0.0, 0.5 * PI, 1.0);
        let e = CurvatureElement::new(-4.0, 0.0, 1.5 * PI, 0.25);
        let parts = subdivide_concentric(&s, &e, Point::new(0.0, 0.0), 0).unwrap();
        assert_eq!(parts.len(), 2);
        let m = parts[0].1;
        assert!((m.point().distance(Point::new(0.0, 0.0)) - 2.0).abs() < 1e-15);
        assert!((m.k - 0.5).abs() < 1e-15);
        assert_eq!(parts[1].0, m);
        let c = m.center_of_curvature().unwrap();
        assert!(c.distance(Point::new(0.0, 0.0)) < 1e-14);
    }

    #[test]
    fn long_concentric_spiral_splits_into_short_ones() {
        // ratio 4, polar sweep 440 degrees: no short spiral joins A and B,
        // both 220 degree halves are solvable
        let s = CurvatureElement::new(4.0, 0.0, 0.5 * PI, 0.25);
        let phi = 80.0 * DEG;
        let e = CurvatureElement::new(phi.cos(), phi.sin(), phi + 0.5 * PI, 1.0);
        let direct = solve_g2_hermite(&s, &e).unwrap();
        assert_eq!(direct.class.tag, Solvability::NoShortSpiral);
        let parts = subdivide_concentric(&s, &e, Point::new(0.0, 0.0), 1).unwrap();
        let m = parts[0].1;
        assert!((m.k - 0.5).abs() < 1e-15);
        for (a, b) in &parts {
            assert!(solve_g2_hermite(a, b).unwrap().is_solvable());
        }
    }

    #[test]
    fn concentric_split_rejects_other_circles() {
        let s = CurvatureElement::new(1.0, 0.0, 0.5 * PI, 1.0);
        let e = CurvatureElement::new(-4.0, 0.0, 1.5 * PI, 0.3);
        assert!(matches!(
            subdivide_concentric(&s, &e, Point::new(0.0, 0.0), 0),
            Err(SpiralError::InvalidGeometry(_))
        ));
    }

    #[test]
    fn chain_needs_two_elements() {
        assert!(solve_chain(&[]).is_err());
        let (s, e) = worked_example();
        let chain = solve_chain(&[s, e]).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(
            chain[0].as_ref().unwrap(),
            &solve_g2_hermite(&s, &e).unwrap()
        );
    }
}
