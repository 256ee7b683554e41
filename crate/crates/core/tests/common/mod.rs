//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rational_spiral::{classify, normalize_to_chord, CurvatureElement, Solvability};

pub const DEG: f64 = PI / 180.0;

pub fn worked_example() -> (CurvatureElement, CurvatureElement) {
    (
        CurvatureElement::new(-1.0, 0.0, -PI, 2.5),
        CurvatureElement::new(1.0, 0.0, 120.0 * DEG, 0.5),
    )
}

pub fn inflection_example() -> (CurvatureElement, CurvatureElement) {
    (
        CurvatureElement::new(-1.0, 0.0, -40.0 * DEG, 3.0),
        CurvatureElement::new(1.0, 0.0, -40.0 * DEG, -2.0),
    )
}

/// A problem with a random chord (half-length 0.1 to 10, any direction and
/// position) and random normalized boundary data.
pub fn random_problem(rng: &mut impl Rng) -> (CurvatureElement, CurvatureElement) {
    let c = 10f64.powf(rng.random_range(-1.0..1.0));
    let mu = rng.random_range(-PI..PI);
    let (ox, oy) = (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
    let alpha = rng.random_range(-PI..PI);
    let beta = rng.random_range(-PI..PI);
    let a = rng.random_range(-6.0..6.0);
    let b = rng.random_range(-6.0..6.0);
    let (sm, cm) = mu.sin_cos();
    let start = CurvatureElement::new(ox - c * cm, oy - c * sm, alpha + mu, a / c);
    let end = CurvatureElement::new(ox + c * cm, oy + c * sm, beta + mu, b / c);
    (start, end)
}

/// `n` problems that classify as solvable, from a fixed seed, together with
/// the number of draws it took.
pub fn solvable_problems(
    seed: u64,
    n: usize,
) -> (Vec<(CurvatureElement, CurvatureElement)>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut draws = 0;
    while out.len() < n {
        draws += 1;
        let (s, e) = random_problem(&mut rng);
        let (_, p) = normalize_to_chord(&s, &e).unwrap();
        if classify(&p).tag == Solvability::Solvable {
            out.push((s, e));
        }
    }
    (out, draws)
}
