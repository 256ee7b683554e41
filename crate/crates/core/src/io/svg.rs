//! SVG drawings of solutions and clothoid approximations.

use std::fmt::Write;

use crate::analysis::lense_of;
use crate::clothoid::{clothoid_point, ClothoidApproximation};
use crate::geom::Point;
use crate::io::sample_parameters;
use crate::solver::SolveOutcome;

/// Points per drawn curve, uniform in the curve parameter.
pub const SVG_POINTS: usize = 256;

const CANVAS: f64 = 800.0;
const PAD: f64 = 20.0;
const SOLUTION_COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

#[derive(Debug, Clone)]
struct Stroke {
    points: Vec<Point>,
    color: &'static str,
    width: f64,
    dash: Option<&'static str>,
}

/// Polylines in world coordinates, fitted into a fixed canvas with the
/// y axis pointing up.
#[derive(Debug, Clone, Default)]
pub struct Scene {
    strokes: Vec<Stroke>,
}

impl Scene {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn polyline(&mut self, points: Vec<Point>, color: &'static str, width: f64) -> &mut Self {
        self.strokes.push(Stroke {
            points,
            color,
            width,
            dash: None,
        });
        self
    }

    pub fn dashed(&mut self, points: Vec<Point>, color: &'static str, width: f64) -> &mut Self {
        self.strokes.push(Stroke {
            points,
            color,
            width,
            dash: Some("6 4"),
        });
        self
    }

    pub fn render(&self) -> String {
        let all = self.strokes.iter().flat_map(|s| s.points.iter());
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in all.filter(|p| p.x.is_finite() && p.y.is_finite()) {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        if x0 > x1 {
            (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-300);
        let scale = (CANVAS - 2.0 * PAD) / span;
        let width = (x1 - x0) * scale + 2.0 * PAD;
        let height = (y1 - y0) * scale + 2.0 * PAD;
        let map = |p: &Point| ((p.x - x0) * scale + PAD, (y1 - p.y) * scale + PAD);

        let mut out = String::new();
        writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
        )
        .unwrap();
        for s in self.strokes.iter().filter(|s| s.points.len() >= 2) {
            let mut d = String::new();
            for (i, p) in s.points.iter().enumerate() {
                let (x, y) = map(p);
                let cmd = if i == 0 { 'M' } else { 'L' };
                write!(d, "{}{cmd} {x:.3} {y:.3}", if i == 0 { "" } else { " " }).unwrap();
            }
            let dash = s
                .dash
                .map(|d| format!(r#" stroke-dasharray="{d}""#))
                .unwrap_or_default();
            writeln!(
                out,
                r#"  <path d="{d}" fill="none" stroke="{}" stroke-width="{:.2}"{dash}/>"#,
                s.color, s.width
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Chord, lense (dashed), control polygons, and both solution curves.
pub fn solution_svg(outcome: &SolveOutcome) -> String {
    let frame = outcome.frame;
    let mut scene = Scene::new();
    let a = frame.map_back(Point::new(-1.0, 0.0));
    let b = frame.map_back(Point::new(1.0, 0.0));
    scene.polyline(vec![a, b], "#000000", 1.0);
    let lense = lense_of(&outcome.problem);
    for arc in [lense.first, lense.second] {
        let pts = sample_parameters(SVG_POINTS)
            .map(|u| frame.map_back(arc.eval(u)))
            .collect();
        scene.dashed(pts, "#7f7f7f", 1.0);
    }
    for (curve, color) in outcome.solutions.iter().zip(SOLUTION_COLORS) {
        scene.polyline(curve.control_polygon().to_vec(), "#bbbbbb", 0.8);
        let pts = sample_parameters(SVG_POINTS)
            .map(|t| curve.eval(t))
            .collect();
        scene.polyline(pts, color, 2.0);
    }
    scene.render()
}

/// The clothoid (dashed) with both approximations on every span.
pub fn clothoid_svg(approx: &ClothoidApproximation) -> String {
    let mut scene = Scene::new();
    let (s0, s1) = (approx.breakpoints[0], *approx.breakpoints.last().unwrap());
    let reference = sample_parameters(4 * SVG_POINTS)
        .map(|f| {
            let c = clothoid_point(s0 + f * (s1 - s0));
            Point::new(c.x, c.y)
        })
        .collect();
    scene.dashed(reference, "#000000", 1.0);
    for outcome in &approx.spans {
        for (curve, color) in outcome.solutions.iter().zip(SOLUTION_COLORS) {
            let pts = sample_parameters(SVG_POINTS)
                .map(|t| curve.eval(t))
                .collect();
            scene.polyline(pts, color, 1.5);
        }
    }
    scene.render()
}
