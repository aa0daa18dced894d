use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::group::{GroupElement, UpperHalfPoint};

/// Slack used for the `|τ| ≥ 1` test.
const UNIT_CIRCLE_EPS: f64 = 1e-14;

/// Result of reducing a point into the closure of the fundamental domain
/// `{|Re τ| ≤ 1, |τ| ≥ 1}` of Γ_θ.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub original: UpperHalfPoint,
    pub gamma: GroupElement,
    pub reduced: UpperHalfPoint,
    /// Number of `S` steps on the reduction path (0 for the identity).
    pub inversions: u32,
    /// `Im` of the reduced point.
    pub height: f64,
    /// Points at which `S` was applied, in order.
    pub inversion_points: Vec<Complex64>,
}

/// Shift into `Re τ ∈ (−1, 1]`, returning the new point and the shift count `k`.
fn shift_into_strip(tau: Complex64) -> (Complex64, i64) {
    let k = ((-1.0 - tau.re) / 2.0).floor() as i64 + 1;
    let mut t = tau + Complex64::new(2.0 * k as f64, 0.0);
    // floating rounding can leave Re just outside the strip
    if t.re <= -1.0 {
        t.re += 2.0;
        return (t, k + 1);
    }
    if t.re > 1.0 {
        t.re -= 2.0;
        return (t, k - 1);
    }
    (t, k)
}

/// Reduces `tau` by `T^{2k}` translations and inversions `S`.
///
/// Ties on the boundary pick `Re τ ∈ (−1, 1]` and, on `|τ| = 1`, `Re τ ≥ 0`.
pub fn reduce_to_fundamental(tau: UpperHalfPoint) -> ReducedPoint {
    let mut t = tau.to_complex();
    let mut gamma = GroupElement::IDENTITY;
    let mut points = Vec::new();
    loop {
        let (shifted, k) = shift_into_strip(t);
        if k != 0 {
            gamma = GroupElement::t2(k) * gamma;
        }
        t = shifted;
        let r2 = t.norm_sqr();
        let inside = r2 < 1.0 - UNIT_CIRCLE_EPS;
        let tie = !inside && r2 <= 1.0 + UNIT_CIRCLE_EPS && t.re < 0.0;
        if !(inside || tie) {
            break;
        }
        points.push(t);
        t = -1.0 / t;
        gamma = GroupElement::S * gamma;
        if tie {
            // −1/τ = −τ̄ on the unit circle, already in the strip
            break;
        }
    }
    let reduced = UpperHalfPoint::new(t.re, t.im).expect("reduction stays in the upper half-plane");
    ReducedPoint {
        original: tau,
        gamma,
        reduced,
        inversions: points.len() as u32,
        height: t.im,
        inversion_points: points,
    }
}
