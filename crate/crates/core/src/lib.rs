//! Planar spiral arcs with prescribed curvature elements at both ends.
//!
//! A spiral parabolic arc is solved in closed form so that its boundary
//! circles share the inversive invariants of the requested ones; a Moebius
//! transformation fixing the chord endpoints then carries it onto a degree-4
//! rational curve with exactly the requested tangents and curvatures.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod clothoid;
pub mod error;
pub mod geom;
pub mod io;
pub mod moebius;
pub mod parabola;
pub mod quad;
pub mod solver;

pub use analysis::{
    assert_monotone, contains_in_lense, curvature_profile, find_inflection, lense_of,
    CurvatureProfile, CurvatureSample, Lense, Monotonicity,
};
pub use clothoid::{
    approximate_clothoid, approximate_with_breakpoints, clothoid_element, clothoid_point,
    curvature_comparison, greedy_breakpoints, refine, ClothoidApproximation, ClothoidPoint,
    CurvatureRow, SpanPolicy,
};
pub use error::{Result, SpiralError};
pub use geom::{
    classify, invariants_of, map_back, normalize_to_chord, ChordFrame, CurvatureElement,
    InvariantPair, NormalizedProblem, Point, Solvability, SolvabilityClass,
};
pub use io::{ProblemDocument, SolutionDocument};
pub use moebius::{
    apply_moebius, eval_rational, expand_rational_coeffs, params_from_pairs, transform_circle,
    ChordEnd, MoebiusParams, RationalCoeffs,
};
pub use parabola::{
    boundary_angles, boundary_curvatures, eval_parabola, hyperbola_rho, is_spiral_control,
    parabola_curvature, q_max, q_of_xi, solve_control_points, ParabolicArc, QuarticSolution,
};
pub use solver::{
    solve_chain, solve_g2_hermite, subdivide_concentric, Diagnostics, RationalSpiralArc,
    SolveOutcome,
};
