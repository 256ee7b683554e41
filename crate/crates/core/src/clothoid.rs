//! Cornu spiral reference curve and its piecewise approximation by rational
//! spirals.
//!
//! The clothoid is taken with unit flatness: `k(s) = s`, `tau(s) = s^2 / 2`,
//! starting at the origin with a horizontal tangent. Any other scaling is a
//! similarity, under which the construction is equivariant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{arc_length, curvature_profile};
use crate::error::{Result, SpiralError};
use crate::geom::{classify, normalize_to_chord, CurvatureElement, Point, Solvability};
use crate::quad;
use crate::solver::{solve_g2_hermite, RationalSpiralArc, SolveOutcome};

const FRESNEL_TOLERANCE: f64 = 1e-13;

/// Samples per span for deviation and curvature comparison.
pub const DEVIATION_SAMPLES: usize = 1000;

/// Resolution of the arc-length table used to match curves by length.
const LENGTH_TABLE: usize = 512;

/// Bisection steps for the farthest solvable span end.
const SEARCH_STEPS: usize = 50;

/// Tangent turning between candidate span ends.
const TURN_STEP: f64 = 0.02;

const MAX_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClothoidPoint {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub tau: f64,
    pub k: f64,
}

impl ClothoidPoint {
    pub fn element(&self) -> CurvatureElement {
        CurvatureElement::new(self.x, self.y, self.tau, self.k)
    }
}

pub fn clothoid_point(s: f64) -> ClothoidPoint {
    // unit pieces keep the oscillating integrand well resolved
    let pieces = s.abs().ceil().max(1.0) as usize;
    let h = s / pieces as f64;
    let (mut x, mut y) = (0.0, 0.0);
    for i in 0..pieces {
        let a = i as f64 * h;
        let b = a + h;
        x += quad::integrate(|u| (0.5 * u * u).cos(), a, b, FRESNEL_TOLERANCE, 0.0);
        y += quad::integrate(|u| (0.5 * u * u).sin(), a, b, FRESNEL_TOLERANCE, 0.0);
    }
    ClothoidPoint {
        s,
        x,
        y,
        tau: 0.5 * s * s,
        k: s,
    }
}

pub fn clothoid_element(s: f64) -> CurvatureElement {
    clothoid_point(s).element()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanPolicy {
    /// Fraction of the farthest solvable span length actually used.
    pub margin: f64,
}

impl Default for SpanPolicy {
    fn default() -> Self {
        Self { margin: 0.99 }
    }
}

fn span_class(s0: f64, s1: f64) -> Option<Solvability> {
    normalize_to_chord(&clothoid_element(s0), &clothoid_element(s1))
        .ok()
        .map(|(_, p)| classify(&p).tag)
}

fn span_is_solvable(s0: f64, s1: f64) -> bool {
    span_class(s0, s1) == Some(Solvability::Solvable)
}

/// Farthest `s1 <= limit` such that every clothoid span `[s0, s]` with
/// `s0 < s <= s1` is solvable. Candidate ends are stepped so the tangent
/// turns by at most `TURN_STEP` per step, then the first failure is bisected.
/// Very short spans have `|Q|` below the biarc tolerance and are skipped.
fn farthest_solvable(s0: f64, limit: f64) -> Result<f64> {
    let mut lo = s0;
    let mut s = s0;
    loop {
        // tau = s^2 / 2, so a turn of TURN_STEP needs ds ~ TURN_STEP / |k|
        let ds = (TURN_STEP / s.abs().max(TURN_STEP.sqrt())).min(MAX_STEP);
        s = (s + ds).min(limit);
        match span_class(s0, s) {
            Some(Solvability::Solvable) => {}
            Some(Solvability::BiarcOnly) if lo == s0 => {
                if s >= limit {
                    return Ok(limit);
                }
                continue;
            }
            _ => break,
        }
        lo = s;
        if s >= limit {
            return Ok(limit);
        }
    }
    if lo == s0 {
        return Err(SpiralError::NotApplicable(format!(
            "no solvable span starts at s = {s0}"
        )));
    }
    let mut hi = s;
    for _ in 0..SEARCH_STEPS {
        let mid = 0.5 * (lo + hi);
        if span_is_solvable(s0, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Greedy breakpoints: each span reaches `margin` of the way to the
/// farthest solvable end.
pub fn greedy_breakpoints(s_start: f64, s_end: f64, policy: SpanPolicy) -> Result<Vec<f64>> {
    if !(s_start < s_end) {
        return Err(SpiralError::Domain(format!(
            "empty clothoid range [{s_start}, {s_end}]"
        )));
    }
    if !(policy.margin > 0.0 && policy.margin <= 1.0) {
        return Err(SpiralError::Domain(format!(
            "margin must lie in (0, 1], got {}",
            policy.margin
        )));
    }
    let mut breaks = vec![s_start];
    let mut s = s_start;
    while s < s_end {
        let far = farthest_solvable(s, s_end)?;
        let next = if far >= s_end {
            s_end
        } else {
            s + policy.margin * (far - s)
        };
        breaks.push(next);
        s = next;
    }
    Ok(breaks)
}

/// Breakpoints with the midpoint of every span inserted.
pub fn refine(breaks: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * breaks.len());
    for w in breaks.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.extend(breaks.last());
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanDeviation {
    pub s0: f64,
    pub s1: f64,
    /// Max distance to the clothoid for each solution.
    pub max_distance: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub spans: Vec<SpanDeviation>,
    pub max_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClothoidApproximation {
    pub breakpoints: Vec<f64>,
    pub spans: Vec<SolveOutcome>,
    pub deviation: DeviationReport,
}

/// Samples of a curve at equally spaced arc-length fractions.
struct LengthTable {
    ts: Vec<f64>,
    ss: Vec<f64>,
}

impl LengthTable {
    fn new(curve: &RationalSpiralArc) -> Self {
        let profile = curvature_profile(curve, LENGTH_TABLE + 1);
        Self {
            ts: profile.samples.iter().map(|s| s.t).collect(),
            ss: profile.samples.iter().map(|s| s.s).collect(),
        }
    }

    fn total(&self) -> f64 {
        *self.ss.last().unwrap()
    }

    /// Parameter where the arc length from the start equals `target`.
    fn param_at(&self, curve: &RationalSpiralArc, target: f64) -> f64 {
        let i = match self.ss.binary_search_by(|s| s.total_cmp(&target)) {
            Ok(i) => return self.ts[i],
            Err(i) => i.clamp(1, self.ss.len() - 1),
        };
        let (t0, t1) = (self.ts[i - 1], self.ts[i]);
        let (s0, s1) = (self.ss[i - 1], self.ss[i]);
        let mut t = t0 + (target - s0) / (s1 - s0) * (t1 - t0);
        // Newton on the arc length measured from the table node
        for _ in 0..3 {
            let err = s0 + arc_length(curve, t0, t) - target;
            t -= err / curve.speed(t);
            t = t.clamp(t0, t1);
        }
        t
    }
}

fn span_deviation(outcome: &SolveOutcome, s0: f64, s1: f64) -> SpanDeviation {
    let max_distance = outcome
        .solutions
        .iter()
        .map(|curve| {
            let table = LengthTable::new(curve);
            (0..DEVIATION_SAMPLES)
                .map(|i| {
                    let f = i as f64 / (DEVIATION_SAMPLES - 1) as f64;
                    let c = clothoid_point(s0 + f * (s1 - s0));
                    let t = table.param_at(curve, f * table.total());
                    curve.eval(t).distance(Point::new(c.x, c.y))
                })
                .fold(0.0, f64::max)
        })
        .collect();
    SpanDeviation {
        s0,
        s1,
        max_distance,
    }
}

/// Solves every span between consecutive breakpoints and measures the
/// distance of both solutions to the clothoid.
pub fn approximate_with_breakpoints(breaks: &[f64]) -> Result<ClothoidApproximation> {
    if breaks.len() < 2 {
        return Err(SpiralError::Domain("need at least two breakpoints".into()));
    }
    let results: Vec<Result<(SolveOutcome, SpanDeviation)>> = breaks
        .par_windows(2)
        .map(|w| {
            let outcome = solve_g2_hermite(&clothoid_element(w[0]), &clothoid_element(w[1]))?;
            if !outcome.is_solvable() {
                return Err(SpiralError::NotApplicable(format!(
                    "clothoid span [{}, {}] is {}",
                    w[0], w[1], outcome.class.tag
                )));
            }
            let dev = span_deviation(&outcome, w[0], w[1]);
            Ok((outcome, dev))
        })
        .collect();
    let mut spans = Vec::with_capacity(results.len());
    let mut devs = Vec::with_capacity(results.len());
    for r in results {
        let (o, d) = r?;
        spans.push(o);
        devs.push(d);
    }
    let max_distance = devs
        .iter()
        .flat_map(|d| d.max_distance.iter().copied())
        .fold(0.0, f64::max);
    Ok(ClothoidApproximation {
        breakpoints: breaks.to_vec(),
        spans,
        deviation: DeviationReport {
            spans: devs,
            max_distance,
        },
    })
}

pub fn approximate_clothoid(
    s_start: f64,
    s_end: f64,
    policy: SpanPolicy,
) -> Result<ClothoidApproximation> {
    let breaks = greedy_breakpoints(s_start, s_end, policy)?;
    approximate_with_breakpoints(&breaks)
}

/// One row of the curvature comparison: clothoid arc length, its
/// curvature, and the curvature of each solution at the same arc-length
/// fraction of the span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRow {
    pub s: f64,
    pub k_clothoid: f64,
    pub k_solution1: f64,
    pub k_solution2: f64,
}

pub fn curvature_comparison(approx: &ClothoidApproximation, per_span: usize) -> Vec<CurvatureRow> {
    let per_span = per_span.max(2);
    let mut rows = Vec::new();
    for (outcome, w) in approx.spans.iter().zip(approx.breakpoints.windows(2)) {
        let tables: Vec<LengthTable> = outcome.solutions.iter().map(LengthTable::new).collect();
        for i in 0..per_span {
            let f = i as f64 / (per_span - 1) as f64;
            let s = w[0] + f * (w[1] - w[0]);
            let k: Vec<f64> = outcome
                .solutions
                .iter()
                .zip(&tables)
                .map(|(c, tab)| c.curvature(tab.param_at(c, f * tab.total())))
                .collect();
            rows.push(CurvatureRow {
                s,
                k_clothoid: s,
                k_solution1: k[0],
                k_solution2: k[1],
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin() {
        let c = clothoid_point(0.0);
        assert_eq!((c.x, c.y, c.tau, c.k), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn odd_symmetry() {
        for &s in &[0.3, 1.0, 2.7] {
            let p = clothoid_point(s);
            let m = clothoid_point(-s);
            assert!((p.x + m.x).abs() < 1e-14 && (p.y + m.y).abs() < 1e-14);
            assert_eq!(m.k, -p.k);
            assert_eq!(m.tau, p.tau);
        }
    }

    #[test]
    fn refine_inserts_midpoints() {
        assert_eq!(refine(&[0.0, 1.0, 3.0]), vec![0.0, 0.5, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn bad_ranges() {
        assert!(greedy_breakpoints(1.0, 1.0, SpanPolicy::default()).is_err());
        assert!(greedy_breakpoints(0.0, 1.0, SpanPolicy { margin: 0.0 }).is_err());
    }
}
