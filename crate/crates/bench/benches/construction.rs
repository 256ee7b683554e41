use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rational_spiral::{
    curvature_profile, expand_rational_coeffs, q_max, solve_g2_hermite, CurvatureElement,
};

fn worked_example() -> (CurvatureElement, CurvatureElement) {
    (
        CurvatureElement::new(-1.0, 0.0, -std::f64::consts::PI, 2.5),
        CurvatureElement::new(1.0, 0.0, 120f64.to_radians(), 0.5),
    )
}

fn construction(c: &mut Criterion) {
    let (start, end) = worked_example();
    c.bench_function("solve_g2_hermite", |b| {
        b.iter(|| solve_g2_hermite(black_box(&start), black_box(&end)).unwrap())
    });

    let outcome = solve_g2_hermite(&start, &end).unwrap();
    let curve = &outcome.solutions[0];
    c.bench_function("expand_rational_coeffs", |b| {
        b.iter(|| expand_rational_coeffs(black_box(&curve.arc), black_box(&curve.params)))
    });
    c.bench_function("curvature_profile_1000", |b| {
        b.iter(|| curvature_profile(black_box(curve), 1000))
    });
    c.bench_function("q_max", |b| b.iter(|| q_max(black_box(-1.0)).unwrap()));
}

criterion_group!(benches, construction);
criterion_main!(benches);
