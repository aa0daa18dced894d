//! `f_n(x) = sin(πx) Σ_ν ã_{n,ν} e^{−2π√(2x(ν+3/8))}/√(2(ν+3/8))` for `x > n`,
//! from the expansion of `g_n` at the cusp 1.

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Float, Integer};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use super::{integer_distance, EvalMethod, EvalResult};
use crate::error::{Error, Result};
use crate::modular::g_cusp1_coefficients;

const PREC: u32 = 96;

/// Exact cusp-1 coefficients `ã_{n,ν}`, grown on demand and shared.
pub struct CuspCoefficients {
    table: RwLock<HashMap<usize, Arc<Vec<Integer>>>>,
}

impl CuspCoefficients {
    pub fn global() -> &'static CuspCoefficients {
        static G: OnceLock<CuspCoefficients> = OnceLock::new();
        G.get_or_init(|| CuspCoefficients { table: RwLock::new(HashMap::new()) })
    }

    /// At least `count` coefficients `ã_{n,0..}`.
    pub fn get(&self, n: usize, count: usize) -> Result<Arc<Vec<Integer>>> {
        if let Some(v) = self.table.read().expect("coefficient cache poisoned").get(&n) {
            if v.len() >= count {
                return Ok(v.clone());
            }
        }
        let len = count.max(16).next_power_of_two();
        let v = Arc::new(g_cusp1_coefficients(n, len)?);
        self.table.write().expect("coefficient cache poisoned").insert(n, v.clone());
        Ok(v)
    }
}

fn term(c: &Integer, x: f64, nu: usize) -> f64 {
    let u = (2.0 * (nu as f64 + 0.375)).sqrt();
    let two_pi = Float::with_val(PREC, Constant::Pi) * 2u32;
    let e = Float::with_val(PREC, -(two_pi * (x.sqrt() * u))).exp();
    (Float::with_val(PREC, c) * e / u).to_f64()
}

/// `h_n(x) = f_n(x)/sin(πx)` by the first `nu_max` terms, with the first
/// omitted term as error.
pub fn h_laplace(n: usize, x: f64, nu_max: usize) -> Result<(f64, f64)> {
    if !(x > n as f64) {
        return Err(Error::invalid(format!("the cusp-1 series needs x > n, got x = {x}, n = {n}")));
    }
    if nu_max == 0 {
        return Err(Error::invalid("nu_max must be positive"));
    }
    let coeffs = CuspCoefficients::global().get(n, nu_max + 1)?;
    let sum: f64 = (0..nu_max).map(|nu| term(&coeffs[nu], x, nu)).sum();
    let err = term(&coeffs[nu_max], x, nu_max).abs();
    Ok((sum, err))
}

/// Number of terms after which the series is below `tol` relative to its
/// leading term, capped at `cap`.
pub fn laplace_terms(n: usize, x: f64, tol: f64, cap: usize) -> usize {
    // |ã_{n,ν}| grows like e^{2π√(2nν)}, so terms decay like e^{−2π(√x − √n)√(2ν)}
    let gap = x.sqrt() - (n as f64).sqrt();
    if gap <= 0.0 {
        return cap;
    }
    let s = -tol.ln() / (2.0 * PI * gap);
    ((s * s / 2.0).ceil() as usize + 8).min(cap)
}

/// `f_n(x)` by the cusp-1 series. Integer `x` gives exactly 0.
pub fn eval_laplace(n: usize, x: f64, nu_max: usize) -> Result<EvalResult> {
    let (h, err) = h_laplace(n, x, nu_max)?;
    let s = if integer_distance(x) == 0.0 { 0.0 } else { (PI * x).sin() };
    Ok(EvalResult {
        n,
        x: Complex64::new(x, 0.0),
        value: Complex64::new(s * h, 0.0),
        method: EvalMethod::Laplace,
        err: err * s.abs(),
    })
}

/// `f_n(x)/sin π(x − n)` by the series with an automatic number of terms.
pub fn h_quotient_laplace(n: usize, x: f64, tol: f64) -> Result<(f64, f64)> {
    let terms = laplace_terms(n, x, tol, 4096);
    let (h, err) = h_laplace(n, x, terms)?;
    // sin(πx) = (−1)^n sin π(x − n)
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok((sign * h, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_x() {
        assert!(eval_laplace(5, 5.0, 10).is_err());
        assert!(eval_laplace(5, 3.0, 10).is_err());
    }

    #[test]
    fn integer_argument_is_zero() {
        assert_eq!(eval_laplace(3, 7.0, 20).unwrap().value.re, 0.0);
    }

    #[test]
    fn leading_term_decay() {
        // for large x the ν = 0 term dominates: ã_{1,0} = −240, u₀ = √(3/4)
        let (h, _) = h_laplace(1, 9.0, 30).unwrap();
        let lead = -240.0 * (-2.0 * PI * 3.0 * 0.75f64.sqrt()).exp() / 0.75f64.sqrt();
        assert!(((h - lead) / lead).abs() < 1e-4);
    }
}
