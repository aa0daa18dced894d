use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    re: f64,
    im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::invalid(format!(
                "point {re} + {im}i is not in the upper half-plane"
            )));
        }
        Ok(UpperHalfPoint { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// An element of SL₂(ℤ), usually of the theta group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl GroupElement {
    /// Checked constructor: determinant one and membership in Γ_θ.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let g = GroupElement { a, b, c, d };
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return Err(Error::invalid(format!("{g} has determinant != 1")));
        }
        if !g.in_theta_group() {
            return Err(Error::invalid(format!("{g} is not in the theta group")));
        }
        Ok(g)
    }

    pub const IDENTITY: GroupElement = GroupElement { a: 1, b: 0, c: 0, d: 1 };
    pub const S: GroupElement = GroupElement { a: 0, b: -1, c: 1, d: 0 };

    /// `T^{2k}: τ ↦ τ + 2k`.
    pub fn t2(k: i64) -> Self {
        GroupElement { a: 1, b: 2 * k, c: 0, d: 1 }
    }

    /// Congruent to the identity or to `S` mod 2.
    pub fn in_theta_group(&self) -> bool {
        let p = [self.a, self.b, self.c, self.d].map(|x| x.rem_euclid(2));
        p == [1, 0, 0, 1] || p == [0, 1, 1, 0]
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn neg(&self) -> Self {
        GroupElement { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn inverse(&self) -> Self {
        GroupElement { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Möbius action `(aτ + b)/(cτ + d)`.
    pub fn apply(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }

    /// Automorphy factor `j(γ, τ) = cτ + d`.
    pub fn j(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, o: GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_lower_half_plane() {
        assert!(UpperHalfPoint::new(0.0, 0.0).is_err());
        assert!(UpperHalfPoint::new(1.0, -1.0).is_err());
        assert!(UpperHalfPoint::new(f64::NAN, 1.0).is_err());
        assert!(UpperHalfPoint::new(0.3, 1e-9).is_ok());
    }

    #[test]
    fn membership() {
        assert!(GroupElement::new(1, 2, 0, 1).is_ok());
        assert!(GroupElement::new(0, -1, 1, 0).is_ok());
        // T itself is not in the theta group
        assert!(GroupElement::new(1, 1, 0, 1).is_err());
        assert!(GroupElement::new(2, 1, 1, 1).is_err());
        assert!(GroupElement::new(1, 0, 0, 2).is_err());
    }

    #[test]
    fn composition_matches_action() {
        let g = GroupElement::S * GroupElement::t2(3) * GroupElement::S;
        let tau = Complex64::new(0.2, 0.7);
        let stepwise = GroupElement::S.apply(GroupElement::t2(3).apply(GroupElement::S.apply(tau)));
        assert!((g.apply(tau) - stepwise).norm() < 1e-14);
        assert_eq!(g * g.inverse(), GroupElement::IDENTITY);
    }
}
