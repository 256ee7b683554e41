//! JSON problem and solution documents, and SVG/CSV emitters.
//!
//! Every float in a document is written as a decimal string with 17
//! significant digits, so a written document parses back to the same bits
//! and identical inputs give byte-identical output. Readers also accept
//! plain JSON numbers.

pub mod csv;
pub mod svg;

use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::analysis::curvature_profile;
use crate::clothoid::ClothoidApproximation;
use crate::geom::{ChordFrame, CurvatureElement, Point, Solvability};
use crate::solver::{RationalSpiralArc, SolveOutcome};

/// Default number of samples for polylines and curvature profiles.
pub const DEFAULT_SAMPLES: usize = 256;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid document: {0}")]
    Invalid(String),
}

/// A float carried through documents as a round-trippable decimal string.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Real(pub f64);

/// Decimal representation with 17 significant digits.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real(x)
    }
}

impl From<Real> for f64 {
    fn from(x: Real) -> Self {
        x.0
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_real(self.0))
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_real(self.0))
    }
}

struct RealVisitor;

impl Visitor<'_> for RealVisitor {
    type Value = Real;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a number or a decimal string")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
        Ok(Real(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
        Ok(Real(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
        Ok(Real(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
        v.trim()
            .parse()
            .map(Real)
            .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(RealVisitor)
    }
}

fn pair(p: Point) -> [Real; 2] {
    [Real(p.x), Real(p.y)]
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Deg,
    Rad,
}

impl AngleUnit {
    pub fn to_radians(self, angle: f64) -> f64 {
        match self {
            AngleUnit::Deg => angle.to_radians(),
            AngleUnit::Rad => angle,
        }
    }
}

/// A curvature element as written in a problem document. `tau` is in the
/// document's angle unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementRecord {
    pub x: Real,
    pub y: Real,
    pub tau: Real,
    pub k: Real,
}

impl ElementRecord {
    pub fn to_element(&self, unit: AngleUnit) -> CurvatureElement {
        CurvatureElement::new(self.x.0, self.y.0, unit.to_radians(self.tau.0), self.k.0)
    }
}

/// Which per-solution sections a solution document carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSelection {
    pub coefficients: bool,
    pub polyline: bool,
    pub profile: bool,
}

impl Default for OutputSelection {
    fn default() -> Self {
        Self {
            coefficients: true,
            polyline: true,
            profile: true,
        }
    }
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    pub angle_unit: AngleUnit,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub output: OutputSelection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub start: ElementRecord,
    pub end: ElementRecord,
    pub options: ProblemOptions,
}

impl ProblemDocument {
    pub fn new(start: &CurvatureElement, end: &CurvatureElement, unit: AngleUnit) -> Self {
        let record = |e: &CurvatureElement| ElementRecord {
            x: Real(e.x),
            y: Real(e.y),
            tau: Real(match unit {
                AngleUnit::Deg => e.tau.to_degrees(),
                AngleUnit::Rad => e.tau,
            }),
            k: Real(e.k),
        };
        Self {
            start: record(start),
            end: record(end),
            options: ProblemOptions {
                angle_unit: unit,
                samples: DEFAULT_SAMPLES,
                output: OutputSelection::default(),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: ProblemDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<(), DocumentError> {
        for (name, e) in [("start", &self.start), ("end", &self.end)] {
            if ![e.x, e.y, e.tau, e.k].iter().all(|v| v.0.is_finite()) {
                return Err(DocumentError::Invalid(format!(
                    "{name} element is not finite"
                )));
            }
        }
        if self.options.samples < 2 {
            return Err(DocumentError::Invalid(format!(
                "samples must be at least 2, got {}",
                self.options.samples
            )));
        }
        Ok(())
    }

    /// Start and end elements with angles in radians.
    pub fn elements(&self) -> (CurvatureElement, CurvatureElement) {
        let unit = self.options.angle_unit;
        (self.start.to_element(unit), self.end.to_element(unit))
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationRecord {
    pub tag: String,
    pub solvable: bool,
    pub message: String,
}

impl ClassificationRecord {
    pub fn new(tag: Solvability) -> Self {
        Self {
            tag: tag.to_string(),
            solvable: tag == Solvability::Solvable,
            message: tag.describe().to_string(),
        }
    }
}

/// Invariants and solver diagnostics. Angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsRecord {
    pub q: Real,
    pub sigma: Real,
    pub q_max: Option<Real>,
    pub quartic_residual: Option<Real>,
    /// Largest `|dk/ds|` of each solution.
    pub curvature_rate: Vec<Real>,
    /// Index of the solution with the smaller curvature rate.
    pub fairer_solution: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRecord {
    pub c: Real,
    pub mu: Real,
    pub origin: [Real; 2],
}

impl FrameRecord {
    pub fn to_frame(&self) -> ChordFrame {
        ChordFrame {
            c: self.c.0,
            mu: self.mu.0,
            origin: Point::new(self.origin[0].0, self.origin[1].0),
        }
    }
}

/// Fixed point of the transform opposite to the chord, or the point at
/// infinity when the transform is a pure inversion-symmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PoleRecord {
    Finite([Real; 2]),
    Infinite,
}

impl Serialize for PoleRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PoleRecord::Finite(z) => z.serialize(serializer),
            PoleRecord::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for PoleRecord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Finite([Real; 2]),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Finite(z) => Ok(PoleRecord::Finite(z)),
            Raw::Word(w) if w == "infinite" => Ok(PoleRecord::Infinite),
            Raw::Word(w) => Err(de::Error::invalid_value(
                de::Unexpected::Str(&w),
                &"a pair of numbers or \"infinite\"",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoebiusRecord {
    pub r0: Real,
    pub lambda0: Real,
    pub z0: PoleRecord,
}

/// Polynomial coefficients in chord coordinates, ascending powers of `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsRecord {
    pub x: [Real; 5],
    pub y: [Real; 5],
    pub w: [Real; 5],
}

impl CoefficientsRecord {
    /// Point at `t` in world coordinates.
    pub fn eval(&self, frame: &ChordFrame, t: f64) -> Point {
        let horner = |c: &[Real; 5]| c.iter().rev().fold(0.0, |acc, v| acc * t + v.0);
        let w = horner(&self.w);
        frame.map_back(Point::new(horner(&self.x) / w, horner(&self.y) / w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileRecord {
    pub t: Real,
    pub s: Real,
    pub k: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionRecord {
    pub solution_index: u8,
    /// Control point `(p, q)` of the parabolic source arc.
    pub control_point: [Real; 2],
    /// Source control polygon mapped to world coordinates.
    pub control_polygon: [[Real; 2]; 3],
    pub moebius: MoebiusRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<CoefficientsRecord>,
    /// World points at `t = i / (n - 1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polyline: Option<Vec<[Real; 2]>>,
    /// Curvature against arc length, at the same parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<ProfileRecord>>,
}

/// Uniform parameters `i / (n - 1)`.
pub fn sample_parameters(n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| i as f64 / (n - 1) as f64)
}

impl SolutionRecord {
    pub fn new(curve: &RationalSpiralArc, samples: usize, output: OutputSelection) -> Self {
        let z0 = match curve.params.z0() {
            Some(z) => PoleRecord::Finite([Real(z.re), Real(z.im)]),
            None => PoleRecord::Infinite,
        };
        let c = &curve.coeffs;
        let coefficients = output.coefficients.then(|| CoefficientsRecord {
            x: c.x.map(Real),
            y: c.y.map(Real),
            w: c.w.map(Real),
        });
        let polyline = output.polyline.then(|| {
            sample_parameters(samples)
                .map(|t| pair(curve.eval(t)))
                .collect()
        });
        let profile = output.profile.then(|| {
            curvature_profile(curve, samples)
                .samples
                .iter()
                .map(|s| ProfileRecord {
                    t: Real(s.t),
                    s: Real(s.s),
                    k: Real(s.k),
                })
                .collect()
        });
        Self {
            solution_index: curve.solution_index,
            control_point: [Real(curve.arc.p), Real(curve.arc.q)],
            control_polygon: curve.control_polygon().map(pair),
            moebius: MoebiusRecord {
                r0: Real(curve.params.r0),
                lambda0: Real(curve.params.lambda0),
                z0,
            },
            coefficients,
            polyline,
            profile,
        }
    }

    pub fn z0(&self) -> Option<Complex64> {
        match self.moebius.z0 {
            PoleRecord::Finite([re, im]) => Some(Complex64::new(re.0, im.0)),
            PoleRecord::Infinite => None,
        }
    }
}

/// Result of a solve, written also for unsolvable problems (with no
/// solutions) so that callers always get the classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub classification: ClassificationRecord,
    pub diagnostics: DiagnosticsRecord,
    pub frame: FrameRecord,
    pub solutions: Vec<SolutionRecord>,
}

impl SolutionDocument {
    pub fn new(outcome: &SolveOutcome, options: &ProblemOptions) -> Self {
        let d = &outcome.diagnostics;
        let f = &outcome.frame;
        Self {
            classification: ClassificationRecord::new(outcome.class.tag),
            diagnostics: DiagnosticsRecord {
                q: Real(d.invariants.q),
                sigma: Real(d.invariants.sigma),
                q_max: d.q_max.map(Real),
                quartic_residual: d.quartic_residual.map(Real),
                curvature_rate: d.curvature_rate.iter().copied().map(Real).collect(),
                fairer_solution: d.fairer.map(|i| outcome.solutions[i].solution_index),
            },
            frame: FrameRecord {
                c: Real(f.c),
                mu: Real(f.mu),
                origin: pair(f.origin),
            },
            solutions: outcome
                .solutions
                .iter()
                .map(|s| SolutionRecord::new(s, options.samples, options.output))
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanRecord {
    pub s0: Real,
    pub s1: Real,
    pub max_distance: Vec<Real>,
}

/// Summary of a clothoid approximation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClothoidReport {
    pub breakpoints: Vec<Real>,
    pub spans: Vec<SpanRecord>,
    pub max_distance: Real,
}

impl ClothoidReport {
    pub fn new(approx: &ClothoidApproximation) -> Self {
        Self {
            breakpoints: approx.breakpoints.iter().copied().map(Real).collect(),
            spans: approx
                .deviation
                .spans
                .iter()
                .map(|s| SpanRecord {
                    s0: Real(s.s0),
                    s1: Real(s.s1),
                    max_distance: s.max_distance.iter().copied().map(Real).collect(),
                })
                .collect(),
            max_distance: Real(approx.deviation.max_distance),
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip_through_strings() {
        for x in [
            0.0,
            -0.0,
            1.0 / 3.0,
            -8.845e-1,
            1e-300,
            6.02e23,
            f64::MIN_POSITIVE,
        ] {
            let text = serde_json::to_string(&Real(x)).unwrap();
            let back: Real = serde_json::from_str(&text).unwrap();
            assert_eq!(back.0.to_bits(), x.to_bits(), "{text}");
        }
        assert_eq!(format_real(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn reals_accept_numbers() {
        let v: Vec<Real> = serde_json::from_str(r#"[1, -2.5, "3e2", " 4 "]"#).unwrap();
        assert_eq!(v, vec![Real(1.0), Real(-2.5), Real(300.0), Real(4.0)]);
        assert!(serde_json::from_str::<Real>(r#""x""#).is_err());
    }

    #[test]
    fn pole_record_forms() {
        let inf: PoleRecord = serde_json::from_str(r#""infinite""#).unwrap();
        assert_eq!(inf, PoleRecord::Infinite);
        let fin: PoleRecord = serde_json::from_str("[1, 2]").unwrap();
        assert_eq!(fin, PoleRecord::Finite([Real(1.0), Real(2.0)]));
        assert!(serde_json::from_str::<PoleRecord>(r#""finite""#).is_err());
    }

    #[test]
    fn problem_parsing_is_strict() {
        let ok = r#"{"start": {"x": -1, "y": 0, "tau": -180, "k": 2.5},
                     "end": {"x": 1, "y": 0, "tau": 120, "k": 0.5},
                     "options": {"angle_unit": "deg"}}"#;
        let doc = ProblemDocument::parse(ok).unwrap();
        assert_eq!(doc.options.samples, DEFAULT_SAMPLES);
        assert_eq!(doc.options.output, OutputSelection::default());
        let (s, e) = doc.elements();
        assert!((s.tau + std::f64::consts::PI).abs() < 1e-15);
        assert!((e.tau - 120f64.to_radians()).abs() < 1e-15);

        let unknown = ok.replace(r#""k": 0.5"#, r#""k": 0.5, "w": 1"#);
        assert!(ProblemDocument::parse(&unknown).is_err());
        let no_unit = ok.replace(r#""angle_unit": "deg""#, r#""samples": 10"#);
        assert!(ProblemDocument::parse(&no_unit).is_err());
        let bad_unit = ok.replace("deg", "grad");
        assert!(ProblemDocument::parse(&bad_unit).is_err());
        let few = ok.replace(r#""deg""#, r#""deg", "samples": 1"#);
        assert!(matches!(
            ProblemDocument::parse(&few),
            Err(DocumentError::Invalid(_))
        ));
    }

    #[test]
    fn problem_document_round_trip() {
        let s = CurvatureElement::new(0.25, -3.0, 1.0, 0.5);
        let e = CurvatureElement::new(2.0, 1.0, -0.5, -1.5);
        for unit in [AngleUnit::Deg, AngleUnit::Rad] {
            let doc = ProblemDocument::new(&s, &e, unit);
            let back = ProblemDocument::parse(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
            let (s2, e2) = back.elements();
            assert!((s2.tau - s.tau).abs() < 1e-15 && (e2.tau - e.tau).abs() < 1e-15);
        }
    }
}
