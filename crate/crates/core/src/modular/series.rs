//! Truncated q-series with exponents in (1/8)ℤ.
//!
//! A series stores its coefficients densely on the eighth-integer grid from
//! `start` up to (but excluding) `order`. Coefficients at exponents at or
//! above `order` are unknown, and every operation propagates the truncation
//! order so that each stored coefficient is exact.

use num_complex::Complex64;
use rug::{Integer, Rational};
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent denominator: index `k` means the exponent `k/8` of `q = e^{2πiτ}`.
pub const DENOM: i64 = 8;

/// Ring operations needed by [`HalfIntSeries`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&mut self, other: &Self);
    fn sub_ref(&mut self, other: &Self);
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Inverse when it exists in the coefficient ring.
    fn unit_inverse(&self) -> Option<Self>;
    /// Exact quotient `self / d`, if it exists in the ring.
    fn div_exact(&self, d: &Self) -> Option<Self>;
    fn to_c64(&self) -> Complex64;
}

impl Coeff for Integer {
    fn zero() -> Self {
        Integer::new()
    }
    fn from_i64(v: i64) -> Self {
        Integer::from(v)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Integer::from(self * other)
    }
    fn neg_ref(&self) -> Self {
        Integer::from(-self)
    }
    fn unit_inverse(&self) -> Option<Self> {
        if *self == 1 || *self == -1 {
            Some(self.clone())
        } else {
            None
        }
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() || !self.is_divisible(d) {
            return None;
        }
        Some(Integer::from(self.div_exact_ref(d)))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::new()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from(v)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += Rational::from(a * b);
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn neg_ref(&self) -> Self {
        Rational::from(-self)
    }
    fn unit_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational::from(self.recip_ref()))
        }
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        d.unit_inverse().map(|inv| self.mul_ref(&inv))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn unit_inverse(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        (*d != 0.0).then(|| self / d)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn unit_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| 1.0 / self)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        (!d.is_zero()).then(|| self / d)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Truncated expansion `Σ_{start ≤ k < order} c_k q^{k/8}`.
#[derive(Clone, PartialEq)]
pub struct HalfIntSeries<T> {
    start: i64,
    coeffs: Vec<T>,
    order: i64,
}

impl<T: Coeff> fmt::Debug for HalfIntSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HalfIntSeries[")?;
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})q^({}/8)", c, k)?;
        }
        write!(f, " + O(q^({}/8))]", self.order)
    }
}

impl<T: Coeff> HalfIntSeries<T> {
    /// The zero series known below exponent `order/8`.
    pub fn zero(order: i64) -> Self {
        HalfIntSeries { start: order, coeffs: Vec::new(), order }
    }

    /// The constant `c + O(q^{order/8})`.
    pub fn constant(c: T, order: i64) -> Self {
        Self::from_terms([(0, c)], order)
    }

    /// Builds a series from `(k, c)` pairs; terms at `k ≥ order` are dropped.
    pub fn from_terms<I: IntoIterator<Item = (i64, T)>>(terms: I, order: i64) -> Self {
        let terms: Vec<(i64, T)> = terms.into_iter().filter(|(k, _)| *k < order).collect();
        let start = terms.iter().map(|(k, _)| *k).min().unwrap_or(order);
        let mut coeffs = vec![T::zero(); (order - start) as usize];
        for (k, c) in terms {
            coeffs[(k - start) as usize].add_ref(&c);
        }
        let mut s = HalfIntSeries { start, coeffs, order };
        s.normalize();
        s
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `q^{(start+i)/8}`.
    pub fn from_dense(start: i64, coeffs: Vec<T>, order: i64) -> Self {
        let mut coeffs = coeffs;
        let len = (order - start).max(0) as usize;
        coeffs.resize(len, T::zero());
        let mut s = HalfIntSeries { start: start.min(order), coeffs, order };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(p) => {
                self.coeffs.drain(..p);
                self.start += p as i64;
            }
            None => {
                self.coeffs.clear();
                self.start = self.order;
            }
        }
    }

    /// Truncation order in eighths: exponents `≥ order/8` are unknown.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Lowest exponent (in eighths) with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    fn val_or_order(&self) -> i64 {
        self.valuation().unwrap_or(self.order)
    }

    /// Coefficient of `q^{k/8}`; `None` when `k` is at or above the truncation order.
    pub fn coeff(&self, k: i64) -> Option<T> {
        if k >= self.order {
            return None;
        }
        if k < self.start {
            return Some(T::zero());
        }
        Some(self.coeffs[(k - self.start) as usize].clone())
    }

    /// Nonzero terms `(k, c)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Drops all terms at exponents `≥ order/8`.
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        let keep = (order - self.start).max(0) as usize;
        let coeffs = self.coeffs.iter().take(keep).cloned().collect();
        HalfIntSeries::from_dense(self.start.min(order), coeffs, order)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let order = self.order.min(other.order);
        let start = self.start.min(other.start).min(order);
        let mut coeffs = vec![T::zero(); (order - start) as usize];
        for (k, c) in self.terms() {
            if k < order {
                coeffs[(k - start) as usize].add_ref(c);
            }
        }
        for (k, c) in other.terms() {
            if k < order {
                let slot = &mut coeffs[(k - start) as usize];
                if subtract {
                    slot.sub_ref(c);
                } else {
                    slot.add_ref(c);
                }
            }
        }
        HalfIntSeries::from_dense(start, coeffs, order)
    }

    pub fn neg(&self) -> Self {
        HalfIntSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(Coeff::neg_ref).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.mul_ref(c)).collect();
        HalfIntSeries::from_dense(self.start, coeffs, self.order)
    }

    /// Exact division of every coefficient by `d`.
    pub fn div_scalar_exact(&self, d: &T) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| x.div_exact(d))
            .collect::<Option<Vec<T>>>()
            .ok_or_else(|| Error::invalid(format!("series not divisible by {:?}", d)))?;
        Ok(HalfIntSeries::from_dense(self.start, coeffs, self.order))
    }

    /// Multiplies by `q^{shift/8}`.
    pub fn shift(&self, shift: i64) -> Self {
        HalfIntSeries {
            start: self.start + shift,
            coeffs: self.coeffs.clone(),
            order: self.order + shift,
        }
    }

    /// Product; its truncation order is `min(o_a + v_b, o_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let (va, vb) = (self.val_or_order(), other.val_or_order());
        let order = (self.order + vb).min(other.order + va);
        let start = (va + vb).min(order);
        let mut coeffs = vec![T::zero(); (order - start) as usize];
        let bt: Vec<(i64, &T)> = other.terms().collect();
        for (ka, ca) in self.terms() {
            for &(kb, cb) in &bt {
                let k = ka + kb;
                if k >= order {
                    break;
                }
                coeffs[(k - start) as usize].add_mul(ca, cb);
            }
        }
        HalfIntSeries::from_dense(start, coeffs, order)
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return HalfIntSeries::constant(T::from_i64(1), self.order.max(1));
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result.expect("positive exponent")
    }

    /// Reciprocal of a series whose leading coefficient is a unit.
    ///
    /// For `a = c q^v (1 + …) + O(q^o)` the reciprocal is known to order `o − 2v`.
    pub fn reciprocal(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::invalid("reciprocal of a zero series"))?;
        let inv_lead = self.coeffs[0]
            .unit_inverse()
            .ok_or_else(|| Error::invalid("leading coefficient is not a unit"))?;
        let order = self.order - 2 * v;
        let len = (order + v).max(0) as usize;
        let tail: Vec<(usize, &T)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut b: Vec<T> = Vec::with_capacity(len);
        for i in 0..len {
            if i == 0 {
                b.push(inv_lead.clone());
                continue;
            }
            let mut acc = T::zero();
            for &(j, aj) in &tail {
                if j > i {
                    break;
                }
                acc.add_mul(aj, &b[i - j]);
            }
            b.push(acc.mul_ref(&inv_lead).neg_ref());
        }
        Ok(HalfIntSeries::from_dense(-v, b, order))
    }

    /// Converts coefficients with `f`.
    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> HalfIntSeries<U> {
        HalfIntSeries::from_dense(self.start, self.coeffs.iter().map(f).collect(), self.order)
    }

    /// Sums the stored terms at `q = e^{2πiτ}`.
    pub fn eval(&self, tau: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.terms() {
            let e = (2.0 * PI * i * tau * (k as f64 / DENOM as f64)).exp();
            acc += c.to_c64() * e;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_series(terms: &[(i64, i64)], order: i64) -> HalfIntSeries<Integer> {
        HalfIntSeries::from_terms(terms.iter().map(|&(k, c)| (k, Integer::from(c))), order)
    }

    #[test]
    fn product_order_follows_valuations() {
        let a = int_series(&[(-4, 1), (0, 3)], 20);
        let b = int_series(&[(8, 2)], 40);
        let p = a.mul(&b);
        assert_eq!(p.order(), 20 + 8);
        assert_eq!(p.coeff(4), Some(Integer::from(2)));
        assert_eq!(p.coeff(8), Some(Integer::from(6)));
    }

    #[test]
    fn reciprocal_of_geometric() {
        // 1/(1 - q) = 1 + q + q^2 + ...
        let a = int_series(&[(0, 1), (8, -1)], 64);
        let r = a.reciprocal().unwrap();
        for k in 0..8 {
            assert_eq!(r.coeff(8 * k), Some(Integer::from(1)));
            assert_eq!(r.coeff(8 * k + 3), Some(Integer::from(0)));
        }
        assert_eq!(r.coeff(64), None);
    }

    #[test]
    fn reciprocal_with_pole() {
        let a = int_series(&[(-4, 1), (0, 24), (4, 276)], 40);
        let r = a.reciprocal().unwrap();
        assert_eq!(r.valuation(), Some(4));
        assert_eq!(r.order(), 48);
        let one = a.mul(&r);
        assert_eq!(one.coeff(0), Some(Integer::from(1)));
        for k in 1..one.order() {
            assert_eq!(one.coeff(k), Some(Integer::from(0)), "k = {k}");
        }
    }

    #[test]
    fn non_unit_reciprocal_rejected() {
        let a = int_series(&[(0, 2)], 16);
        assert!(a.reciprocal().is_err());
        let q = a.map(|c| Rational::from(c.clone()));
        let r = q.reciprocal().unwrap();
        assert_eq!(r.coeff(0), Some(Rational::from((1, 2))));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = int_series(&[(0, 1), (4, 2), (16, 2)], 80);
        let p3 = a.pow(3);
        let direct = a.mul(&a).mul(&a);
        assert_eq!(p3, direct);
        assert_eq!(a.pow(0).coeff(0), Some(Integer::from(1)));
    }

    #[test]
    fn zero_series_product() {
        let z = HalfIntSeries::<Integer>::zero(10);
        let a = int_series(&[(3, 1)], 30);
        let p = z.mul(&a);
        assert_eq!(p.valuation(), None);
        assert_eq!(p.order(), 13);
    }
}
