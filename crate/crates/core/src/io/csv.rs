//! Curvature tables as CSV.

use std::fmt::Write;

use super::format_real;
use crate::analysis::curvature_profile;
use crate::clothoid::CurvatureRow;
use crate::solver::SolveOutcome;

/// Curvature against arc length for both solutions, one row per sample:
/// `t,s_1,k_1,s_2,k_2`. Empty apart from the header when there are no
/// solutions.
pub fn solution_csv(outcome: &SolveOutcome, samples: usize) -> String {
    let profiles: Vec<_> = outcome
        .solutions
        .iter()
        .map(|c| curvature_profile(c, samples))
        .collect();
    let mut out = String::from("t,s_1,k_1,s_2,k_2\n");
    if let [p1, p2] = &profiles[..] {
        for (a, b) in p1.samples.iter().zip(&p2.samples) {
            let row = [a.t, a.s, a.k, b.s, b.k].map(format_real).join(",");
            writeln!(out, "{row}").unwrap();
        }
    }
    out
}

/// Clothoid curvature against both approximations:
/// `s,k_clothoid,k_solution1,k_solution2`.
pub fn clothoid_csv(rows: &[CurvatureRow]) -> String {
    let mut out = String::from("s,k_clothoid,k_solution1,k_solution2\n");
    for r in rows {
        let row = [r.s, r.k_clothoid, r.k_solution1, r.k_solution2]
            .map(format_real)
            .join(",");
        writeln!(out, "{row}").unwrap();
    }
    out
}
