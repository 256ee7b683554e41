//! The Moebius transformation `W(z) = (z + z0) / (1 + z0 z)` fixing `-1`
//! and `+1`.
//!
//! The constant is kept as `omega = r0 e^{i lambda0}` with
//! `z0 = (omega - 1) / (omega + 1)`. In that form
//!
//! ```text
//! W(z) = (omega (1 + z) - (1 - z)) / (omega (1 + z) + (1 - z))
//! ```
//!
//! which stays finite when `z0` is the point at infinity (`omega = -1`).
//! At `z = -1` the map turns tangents by `lambda0` and stretches by `r0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpiralError};
use crate::geom::{invariants_of, wrap_angle, NormalizedProblem, Point};
use crate::parabola::ParabolicArc;

/// Matching tolerance for the invariants of the two circle pairs.
pub const PAIR_TOLERANCE: f64 = 1e-9;

const POLE_TOLERANCE: f64 = 1e-14;

/// `|omega + 1|` below which `z0` is reported as infinite.
const INFINITE_Z0: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusParams {
    pub r0: f64,
    pub lambda0: f64,
}

impl MoebiusParams {
    pub const IDENTITY: MoebiusParams = MoebiusParams {
        r0: 1.0,
        lambda0: 0.0,
    };

    pub fn new(r0: f64, lambda0: f64) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() || !lambda0.is_finite() {
            return Err(SpiralError::Domain(format!(
                "transform needs r0 > 0, got ({r0}, {lambda0})"
            )));
        }
        Ok(Self { r0, lambda0 })
    }

    pub fn omega(&self) -> Complex64 {
        Complex64::from_polar(self.r0, self.lambda0)
    }

    /// The constant `z0`, or `None` when it is the point at infinity.
    pub fn z0(&self) -> Option<Complex64> {
        let w = self.omega();
        let den = w + 1.0;
        if den.norm() < INFINITE_Z0 {
            None
        } else {
            Some((w - 1.0) / den)
        }
    }

    /// Parameters of the transform with the given finite constant.
    pub fn from_z0(z0: Complex64) -> Result<Self> {
        let omega = (1.0 + z0) / (1.0 - z0);
        if !omega.is_finite() {
            return Err(SpiralError::Domain("z0 = +-1 is excluded".into()));
        }
        Self::new(omega.norm(), omega.arg())
    }

    fn numerator_denominator(&self, z: Complex64) -> (Complex64, Complex64) {
        let w = self.omega();
        let u = w * (1.0 + z);
        let v = 1.0 - z;
        (u - v, u + v)
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let w = self.omega();
        let (num, den) = self.numerator_denominator(z);
        let scale = (w + 1.0).norm() + (w - 1.0).norm() * z.norm();
        if den.norm() < POLE_TOLERANCE * scale {
            return Err(SpiralError::Pole);
        }
        Ok(num / den)
    }

    /// `W`, `dW/dz` and `d2W/dz2` at `z`.
    pub fn jet(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let w = self.omega();
        let (num, den) = self.numerator_denominator(z);
        let d2 = den * den;
        let first = 4.0 * w / d2;
        let second = -8.0 * w * (w - 1.0) / (d2 * den);
        (num / den, first, second)
    }

    /// Image of a curve point given with its first two parametric
    /// derivatives: point, first and second derivative, and curvature.
    pub fn push_forward(&self, z: Complex64, dz: Complex64, ddz: Complex64) -> PushForward {
        self.push_forward_anchored(1.0 + z, 1.0 - z, dz, ddz)
    }

    /// Same as [`Self::push_forward`], with the point given by its offsets
    /// `1 + z` and `1 - z` from the fixed points.
    ///
    /// For `|omega| > 1` everything is written through `nu = 1 / omega`, so
    /// small imaginary parts stay exact. The curvature follows the Moebius
    /// law `k_w |W'| = k_z + Im(T W''/W')` with `T` the unit tangent, which
    /// avoids the cross product of two nearly parallel image derivatives.
    pub fn push_forward_anchored(
        &self,
        plus: Complex64,
        minus: Complex64,
        dz: Complex64,
        ddz: Complex64,
    ) -> PushForward {
        let w = self.omega();
        // num / den = W, w1 = W', log_d = W'' / W'
        let (num, den, w1, log_d) = if self.r0 > 1.0 {
            let nu = Complex64::from_polar(1.0 / self.r0, -self.lambda0);
            let den = plus + nu * minus;
            (
                plus - nu * minus,
                den,
                4.0 * nu / (den * den),
                -2.0 * (1.0 - nu) / den,
            )
        } else {
            let den = w * plus + minus;
            (
                w * plus - minus,
                den,
                4.0 * w / (den * den),
                -2.0 * (w - 1.0) / den,
            )
        };
        let speed = dz.norm();
        let k_src = (dz.re * ddz.im - dz.im * ddz.re) / (speed * speed * speed);
        let tangent = dz / speed;
        PushForward {
            point: num / den,
            d1: w1 * dz,
            d2: w1 * (log_d * dz * dz + ddz),
            curvature: (k_src + (log_d * tangent).im) / w1.norm(),
        }
    }
}

/// Image of a point of a curve under the transform, with derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PushForward {
    pub point: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub curvature: f64,
}

/// Which endpoint of the normalized chord a boundary circle is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordEnd {
    Start,
    End,
}

/// Transform constant carrying the boundary circles of `src` onto those of
/// `dst`, both in normalized position.
pub fn params_from_pairs(
    src: &NormalizedProblem,
    dst: &NormalizedProblem,
) -> Result<MoebiusParams> {
    let is = invariants_of(src);
    let id = invariants_of(dst);
    if (is.sigma - id.sigma).abs() > PAIR_TOLERANCE {
        return Err(SpiralError::InvariantMismatch(format!(
            "sigma {} vs {}",
            is.sigma, id.sigma
        )));
    }
    if (is.q - id.q).abs() > PAIR_TOLERANCE * is.q.abs().max(1.0) {
        return Err(SpiralError::InvariantMismatch(format!(
            "Q {} vs {}",
            is.q, id.q
        )));
    }

    let (lambda_start, lambda_end) = lambda_expressions(src, dst);
    if wrap_angle(lambda_start - lambda_end).abs() > PAIR_TOLERANCE {
        return Err(SpiralError::InconsistentRatio(format!(
            "lambda0 {lambda_start} vs {lambda_end}"
        )));
    }

    let (ratio_start, ratio_end) = ratio_expressions(src, dst);
    if !(ratio_start > 0.0 && ratio_end > 0.0) {
        return Err(SpiralError::InvariantMismatch(format!(
            "boundary circles lie on opposite sides of the lense asymptotes \
             (r0 = {ratio_start}, {ratio_end})"
        )));
    }
    if relative_gap(ratio_start, ratio_end) > PAIR_TOLERANCE {
        return Err(SpiralError::InconsistentRatio(format!(
            "r0 {ratio_start} vs {ratio_end}"
        )));
    }
    // take the expression whose sum loses fewer digits
    let r0 = if start_conditioning(src, dst) >= end_conditioning(src, dst) {
        ratio_start
    } else {
        ratio_end
    };
    MoebiusParams::new(r0, lambda_start)
}

/// `(alpha* - alpha, beta - beta*)`, both wrapped; equal for matching pairs.
pub fn lambda_expressions(src: &NormalizedProblem, dst: &NormalizedProblem) -> (f64, f64) {
    (
        wrap_angle(dst.alpha - src.alpha),
        wrap_angle(src.beta - dst.beta),
    )
}

/// The two expressions for `r0`: `(a + sin alpha)/(a* + sin alpha*)` and
/// `(b* - sin beta*)/(b - sin beta)`.
pub fn ratio_expressions(src: &NormalizedProblem, dst: &NormalizedProblem) -> (f64, f64) {
    (
        (src.a + src.alpha.sin()) / (dst.a + dst.alpha.sin()),
        (dst.b - dst.beta.sin()) / (src.b - src.beta.sin()),
    )
}

pub fn relative_gap(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs())
}

fn sum_conditioning(x: f64, y: f64) -> f64 {
    (x + y).abs() / (x.abs() + y.abs())
}

fn start_conditioning(src: &NormalizedProblem, dst: &NormalizedProblem) -> f64 {
    sum_conditioning(src.a, src.alpha.sin()).min(sum_conditioning(dst.a, dst.alpha.sin()))
}

fn end_conditioning(src: &NormalizedProblem, dst: &NormalizedProblem) -> f64 {
    sum_conditioning(src.b, -src.beta.sin()).min(sum_conditioning(dst.b, -dst.beta.sin()))
}

pub fn apply_moebius(z: Point, params: &MoebiusParams) -> Result<Point> {
    params.apply(z.into()).map(Point::from)
}

/// Image of the boundary circle `(tau, k)` anchored at one end of the chord.
pub fn transform_circle(end: ChordEnd, tau: f64, k: f64, params: &MoebiusParams) -> (f64, f64) {
    let MoebiusParams { r0, lambda0 } = *params;
    match end {
        ChordEnd::Start => {
            let tau_new = tau + lambda0;
            (tau_new, (k + tau.sin()) / r0 - tau_new.sin())
        }
        ChordEnd::End => {
            let tau_new = tau - lambda0;
            (tau_new, r0 * (k - tau.sin()) + tau_new.sin())
        }
    }
}

/// Both boundary circles of `problem` under the transform.
pub fn transform_pair(problem: &NormalizedProblem, params: &MoebiusParams) -> NormalizedProblem {
    let (alpha, a) = transform_circle(ChordEnd::Start, problem.alpha, problem.a, params);
    let (beta, b) = transform_circle(ChordEnd::End, problem.beta, problem.b, params);
    NormalizedProblem { alpha, beta, a, b }
}

/// Point of the rational image of the parabolic arc. The expression is
/// multiplied through by the conjugate denominator, so it only involves the
/// squared distances `l1^2`, `l2^2` of the parabola point to the chord ends.
pub fn eval_rational(arc: &ParabolicArc, params: &MoebiusParams, t: f64) -> Point {
    let y = arc.eval(t).y;
    let (from_a, to_b) = arc.end_offsets(t);
    let MoebiusParams { r0, lambda0 } = *params;
    let (sl, cl) = lambda0.sin_cos();
    // 1 - |z|^2 = (1 + x)(1 - x) - y^2
    let one_minus_rr = from_a * to_b - y * y;
    let l1 = from_a * from_a + y * y;
    let l2 = to_b * to_b + y * y;
    let r0l1 = r0 * r0 * l1;
    let den = r0l1 + 2.0 * r0 * (one_minus_rr * cl - 2.0 * y * sl) + l2;
    Point::new(
        (r0l1 - l2) / den,
        2.0 * r0 * (2.0 * y * cl + one_minus_rr * sl) / den,
    )
}

/// Degree-4 polynomials (monomial basis, ascending powers of `t`) with
/// `X = x / w`, `Y = y / w` along the transformed arc. Scaled so that
/// `w(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalCoeffs {
    pub x: [f64; 5],
    pub y: [f64; 5],
    pub w: [f64; 5],
}

fn horner(c: &[f64; 5], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * t + v)
}

impl RationalCoeffs {
    pub fn eval(&self, t: f64) -> Point {
        let w = horner(&self.w, t);
        Point::new(horner(&self.x, t) / w, horner(&self.y, t) / w)
    }

    pub fn denominator(&self, t: f64) -> f64 {
        horner(&self.w, t)
    }

    /// Control points and weights of the equivalent rational Bezier curve.
    pub fn to_rational_bezier(&self) -> [(Point, f64); 5] {
        let bx = monomial_to_bernstein(&self.x);
        let by = monomial_to_bernstein(&self.y);
        let bw = monomial_to_bernstein(&self.w);
        std::array::from_fn(|i| (Point::new(bx[i] / bw[i], by[i] / bw[i]), bw[i]))
    }
}

fn monomial_to_bernstein(a: &[f64; 5]) -> [f64; 5] {
    const BINOM: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    std::array::from_fn(|i| (0..=i).map(|j| BINOM[i][j] / BINOM[4][j] * a[j]).sum())
}

fn poly_mul(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 5] {
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn expand_rational_coeffs(arc: &ParabolicArc, params: &MoebiusParams) -> RationalCoeffs {
    let w = params.omega();
    let one = Complex64::new(1.0, 0.0);
    let ctrl = Complex64::new(arc.p, arc.q);
    // z(t) = -1 + 2(1 + P) t - 2P t^2
    let z = [
        -one,
        2.0 * Complex64::new(arc.one_plus_p, arc.q),
        -2.0 * ctrl,
    ];
    let num: [Complex64; 3] =
        std::array::from_fn(|i| (w + 1.0) * z[i] + if i == 0 { w - 1.0 } else { 0.0.into() });
    let den: [Complex64; 3] =
        std::array::from_fn(|i| (w - 1.0) * z[i] + if i == 0 { w + 1.0 } else { 0.0.into() });
    let den_conj = den.map(|c| c.conj());
    let top = poly_mul(&num, &den_conj);
    let bottom = poly_mul(&den, &den_conj);
    // den(0) = 2, so bottom(0) = 4
    RationalCoeffs {
        x: top.map(|c| c.re / 4.0),
        y: top.map(|c| c.im / 4.0),
        w: bottom.map(|c| c.re / 4.0),
    }
}
