//! Fixed examples checked against independently computed values.

mod common;

use std::f64::consts::PI;

use common::{inflection_example, worked_example, DEG};
use rational_spiral::{
    approximate_clothoid, classify, clothoid_element, clothoid_point, normalize_to_chord,
    solve_chain, solve_g2_hermite, CurvatureElement, NormalizedProblem, Solvability, SpanPolicy,
};

/// Fresnel-type integrals of the unit clothoid by their power series.
fn clothoid_series(s: f64) -> (f64, f64) {
    let (mut x, mut y) = (0.0, 0.0);
    let mut fact = 1.0; // m!
    for m in 0..40i32 {
        if m > 0 {
            fact *= m as f64;
        }
        // cos(u^2/2) + i sin(u^2/2) = sum (i u^2 / 2)^m / m!
        let term = s.powi(2 * m + 1) / (2f64.powi(m) * fact * (2 * m + 1) as f64);
        match m % 4 {
            0 => x += term,
            1 => y += term,
            2 => x -= term,
            _ => y -= term,
        }
    }
    (x, y)
}

#[test]
fn clothoid_matches_series() {
    for s in [0.5, 1.0, 2.0, 3.5, -1.5] {
        let (x, y) = clothoid_series(s);
        let p = clothoid_point(s);
        assert!((p.x - x).abs() < 1e-12, "x({s}) = {} vs {x}", p.x);
        assert!((p.y - y).abs() < 1e-12, "y({s}) = {} vs {y}", p.y);
        assert_eq!(p.tau, 0.5 * s * s);
        assert_eq!(p.k, s);
    }
    let p = clothoid_point(1.0);
    assert!((p.x - 0.975_287_688_200_344_6).abs() < 1e-12);
    assert!((p.y - 0.163_714_047_375_700_6).abs() < 1e-12);
}

fn tag(alpha: f64, beta: f64, a: f64, b: f64) -> Solvability {
    classify(&NormalizedProblem::new(alpha, beta, a, b)).tag
}

#[test]
fn classification_examples() {
    // a zigzag of two straight ends: Q = sin^2(0.3) > 0
    assert_eq!(tag(0.3, -0.3, 0.0, 0.0), Solvability::NoSpiral);
    // both ends on one circle give Q = 0
    assert_eq!(tag(0.3, 0.3, 0.0, 0.0), Solvability::BiarcOnly);
    assert_eq!(tag(0.0, 0.0, 0.0, 0.0), Solvability::BiarcOnly);
    // Q < 0, but the curvature decreases while sigma > 0
    assert_eq!(tag(0.3, 0.3, 2.0, -1.0), Solvability::NoShortSpiral);
    // Q < 0 and consistent signs, but sigma = 2 rad
    assert_eq!(tag(1.0, 1.0, -3.0, 2.0), Solvability::MethodNotApplicable);
    let (s, e) = worked_example();
    let (_, p) = normalize_to_chord(&s, &e).unwrap();
    assert_eq!(classify(&p).tag, Solvability::Solvable);
    let (s, e) = inflection_example();
    let (_, p) = normalize_to_chord(&s, &e).unwrap();
    assert_eq!(classify(&p).tag, Solvability::Solvable);
}

#[test]
fn worked_example_invariants() {
    // alpha = -180 deg, beta = 120 deg, a = 2.5, b = 0.5
    let (s, e) = worked_example();
    let out = solve_g2_hermite(&s, &e).unwrap();
    let inv = out.diagnostics.invariants;
    let sigma = -60.0 * DEG;
    let expected_q = (2.5 + PI.sin()) * (0.5 - (120.0 * DEG).sin()) + (0.5 * sigma).sin().powi(2);
    assert!((inv.sigma - sigma).abs() < 1e-12);
    assert!((inv.q - expected_q).abs() < 1e-12);
    assert!((inv.q + 0.665_063_509_5).abs() < 1e-10);
    assert!((out.diagnostics.q_max.unwrap() + 0.602_972_470_8).abs() < 1e-10);
}

#[test]
fn unsolvable_problems_return_no_solutions() {
    let start = CurvatureElement::new(0.0, 0.0, 0.3, 0.0);
    let end = CurvatureElement::new(2.0, 0.0, -0.3, 0.0);
    let out = solve_g2_hermite(&start, &end).unwrap();
    assert_eq!(out.class.tag, Solvability::NoSpiral);
    assert!(out.solutions.is_empty());
    assert!(out.diagnostics.quartic.is_none());
}

#[test]
fn coincident_endpoints_are_an_error() {
    let e = CurvatureElement::new(1.0, 1.0, 0.0, 1.0);
    assert!(solve_g2_hermite(&e, &e).is_err());
    let bad = CurvatureElement::new(f64::NAN, 0.0, 0.0, 0.0);
    assert!(solve_g2_hermite(&bad, &e).is_err());
}

#[test]
fn clothoid_chain_is_solvable_span_by_span() {
    let breaks = [0.0, 2.2085, 3.2925, 4.0655, 4.6958, 5.2408, 5.7277, 6.0];
    let elements: Vec<_> = breaks.iter().map(|&s| clothoid_element(s)).collect();
    let spans = solve_chain(&elements).unwrap();
    assert_eq!(spans.len(), 7);
    for (i, span) in spans.iter().enumerate() {
        let out = span.as_ref().unwrap();
        assert_eq!(out.class.tag, Solvability::Solvable, "span {i}");
        let (k0, k1) = (breaks[i], breaks[i + 1]);
        for curve in &out.solutions {
            assert!((curve.curvature(0.0) - k0).abs() <= 1e-9 * k0.max(1.0));
            assert!((curve.curvature(1.0) - k1).abs() <= 1e-9 * k1);
        }
    }
    assert!(solve_chain(&elements[..1]).is_err());
}

#[test]
fn clothoid_is_odd() {
    for s in [0.3, 1.0, 2.7] {
        let (p, m) = (clothoid_element(s), clothoid_element(-s));
        assert_eq!((m.x, m.y, m.k), (-p.x, -p.y, -p.k));
        assert_eq!(m.tau, p.tau);
    }
    assert_eq!(
        clothoid_element(0.0),
        CurvatureElement::new(0.0, 0.0, 0.0, 0.0)
    );
}

#[test]
fn smaller_margin_reduces_deviation() {
    let coarse = approximate_clothoid(0.0, 6.0, SpanPolicy { margin: 0.99 }).unwrap();
    let fine = approximate_clothoid(0.0, 6.0, SpanPolicy { margin: 0.495 }).unwrap();
    assert!(fine.breakpoints.len() > coarse.breakpoints.len());
    assert!(fine.deviation.max_distance < coarse.deviation.max_distance);
}
