//! Problem and solution documents, CSV tables, and SVG drawings.

mod common;

use common::{inflection_example, worked_example};
use rational_spiral::io::csv::solution_csv;
use rational_spiral::io::svg::solution_svg;
use rational_spiral::io::{AngleUnit, ProblemDocument, SolutionDocument};
use rational_spiral::{solve_g2_hermite, CurvatureElement};

fn solve_document(doc: &ProblemDocument) -> String {
    let (s, e) = doc.elements();
    let out = solve_g2_hermite(&s, &e).unwrap();
    SolutionDocument::new(&out, &doc.options).to_json()
}

#[test]
fn problem_round_trip() {
    let (s, e) = inflection_example();
    for unit in [AngleUnit::Deg, AngleUnit::Rad] {
        let doc = ProblemDocument::new(&s, &e, unit);
        let back = ProblemDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let (s2, e2) = back.elements();
        assert!((s2.tau - s.tau).abs() < 1e-15 && (e2.tau - e.tau).abs() < 1e-15);
    }
}

#[test]
fn polyline_is_reproduced_by_the_coefficients() {
    let (s, e) = worked_example();
    let text = solve_document(&ProblemDocument::new(&s, &e, AngleUnit::Deg));
    let doc = SolutionDocument::parse(&text).unwrap();
    assert_eq!(doc.classification.tag, "Solvable");
    assert_eq!(doc.solutions.len(), 2);
    let frame = doc.frame.to_frame();
    for sol in &doc.solutions {
        let coeffs = sol.coefficients.as_ref().unwrap();
        let polyline = sol.polyline.as_ref().unwrap();
        let n = polyline.len();
        for (i, [x, y]) in polyline.iter().enumerate() {
            let p = coeffs.eval(&frame, i as f64 / (n - 1) as f64);
            assert!((p.x - x.0).abs() < 1e-9 && (p.y - y.0).abs() < 1e-9);
        }
        let profile = sol.profile.as_ref().unwrap();
        assert_eq!(profile.len(), n);
        assert!(profile.windows(2).all(|w| w[1].s.0 > w[0].s.0));
    }
}

#[test]
fn output_is_deterministic() {
    let (s, e) = inflection_example();
    let doc = ProblemDocument::new(&s, &e, AngleUnit::Rad);
    assert_eq!(solve_document(&doc), solve_document(&doc));
}

#[test]
fn degrees_and_radians_agree() {
    let text = |unit: &str, tau0: &str, tau1: &str| {
        format!(
            r#"{{"start": {{"x": -1, "y": 0, "tau": {tau0}, "k": 2.5}},
                "end": {{"x": 1, "y": 0, "tau": {tau1}, "k": 0.5}},
                "options": {{"angle_unit": "{unit}", "samples": 16}}}}"#
        )
    };
    let deg = ProblemDocument::parse(&text("deg", "-180", "120")).unwrap();
    let rad = ProblemDocument::parse(&text(
        "rad",
        &format!("{}", -std::f64::consts::PI),
        &format!("{}", 120f64.to_radians()),
    ))
    .unwrap();
    let (a, b) = (
        SolutionDocument::parse(&solve_document(&deg)).unwrap(),
        SolutionDocument::parse(&solve_document(&rad)).unwrap(),
    );
    for (x, y) in a.solutions.iter().zip(&b.solutions) {
        for (p, q) in x
            .polyline
            .as_ref()
            .unwrap()
            .iter()
            .zip(y.polyline.as_ref().unwrap())
        {
            assert!((p[0].0 - q[0].0).abs() < 1e-12 && (p[1].0 - q[1].0).abs() < 1e-12);
        }
    }
}

#[test]
fn output_selection_drops_sections() {
    let text = r#"{"start": {"x": -1, "y": 0, "tau": -180, "k": 2.5},
        "end": {"x": 1, "y": 0, "tau": 120, "k": 0.5},
        "options": {"angle_unit": "deg", "output": {"polyline": false, "profile": false}}}"#;
    let out = solve_document(&ProblemDocument::parse(text).unwrap());
    let doc = SolutionDocument::parse(&out).unwrap();
    for sol in &doc.solutions {
        assert!(sol.coefficients.is_some());
        assert!(sol.polyline.is_none() && sol.profile.is_none());
    }
}

#[test]
fn malformed_problems_are_rejected() {
    let bad = [
        "{",
        r#"{"start": {"x": 0, "y": 0, "tau": 0, "k": 0}, "end": {"x": 1, "y": 0, "tau": 0, "k": 0}, "options": {}}"#,
        r#"{"start": {"x": 0, "y": 0, "tau": 0, "k": 0, "extra": 1}, "end": {"x": 1, "y": 0, "tau": 0, "k": 0}, "options": {"angle_unit": "rad"}}"#,
        r#"{"start": {"x": 0, "y": 0, "tau": 0, "k": 0}, "end": {"x": 1, "y": 0, "tau": 0, "k": 0}, "options": {"angle_unit": "rad", "samples": 1}}"#,
        r#"{"start": {"x": "nan", "y": 0, "tau": 0, "k": 0}, "end": {"x": 1, "y": 0, "tau": 0, "k": 0}, "options": {"angle_unit": "rad"}}"#,
    ];
    for text in bad {
        assert!(ProblemDocument::parse(text).is_err(), "{text}");
    }
}

#[test]
fn unsolvable_document_keeps_the_classification() {
    let s = CurvatureElement::new(0.0, 0.0, 0.3, 0.0);
    let e = CurvatureElement::new(2.0, 0.0, -0.3, 0.0);
    let doc = SolutionDocument::parse(&solve_document(&ProblemDocument::new(
        &s,
        &e,
        AngleUnit::Rad,
    )))
    .unwrap();
    assert_eq!(doc.classification.tag, "NoSpiral");
    assert!(!doc.classification.solvable);
    assert!(doc.solutions.is_empty());
}

#[test]
fn csv_has_one_row_per_sample() {
    let (s, e) = worked_example();
    let out = solve_g2_hermite(&s, &e).unwrap();
    let csv = solution_csv(&out, 33);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,s_1,k_1,s_2,k_2"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 33);
    assert!(rows.iter().all(|r| r.len() == 5));
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[32][0], 1.0);
}

/// Every path is `M x y` followed by `L x y` steps with finite numbers.
fn check_path(d: &str) -> bool {
    let tokens: Vec<&str> = d.split_whitespace().collect();
    tokens.len() >= 6
        && tokens.len().is_multiple_of(3)
        && tokens.chunks(3).enumerate().all(|(i, c)| {
            c[0] == if i == 0 { "M" } else { "L" }
                && c[1..]
                    .iter()
                    .all(|v| v.parse::<f64>().is_ok_and(f64::is_finite))
        })
}

#[test]
fn svg_is_well_formed() {
    let (s, e) = worked_example();
    let svg = solution_svg(&solve_g2_hermite(&s, &e).unwrap());
    assert!(svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    let paths: Vec<&str> = svg
        .split("d=\"")
        .skip(1)
        .map(|rest| rest.split('"').next().unwrap())
        .collect();
    // chord, two lense arcs, two control polygons, two curves
    assert_eq!(paths.len(), 7);
    assert!(paths.iter().all(|d| check_path(d)));
}
