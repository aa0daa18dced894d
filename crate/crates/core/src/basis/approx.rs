//! `f_n(z) ≈ sin π(z − n)·Φ(√z − √n)/√n` for `Re √z > (1/3 + ε)√n`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{EvalMethod, EvalResult};
use crate::error::{Error, Result};
use crate::special::default_phi;

#[derive(Clone, Copy, Debug)]
pub struct ApproxParams {
    /// Margin beyond the threshold `√n/3`.
    pub eps: f64,
    /// Constant in the heuristic error `C e^{π√3(√n/3 − Re √z)}`.
    pub c: f64,
}

impl Default for ApproxParams {
    fn default() -> Self {
        ApproxParams { eps: 0.05, c: 10.0 }
    }
}

/// `Φ(w) − 1/(2πw)`, regular at 0.
pub fn phi_regular(w: Complex64) -> Result<Complex64> {
    default_phi().phi_regular(w)
}

fn check_region(n: usize, z: Complex64, p: &ApproxParams) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::invalid("the Φ approximation needs n ≥ 1"));
    }
    let sz = z.sqrt();
    let bound = (1.0 / 3.0 + p.eps) * (n as f64).sqrt();
    if !(sz.re > bound) {
        return Err(Error::invalid(format!(
            "Re √z = {:.6} is not above (1/3 + {})√n = {bound:.6} (n = {n}, z = {z})",
            sz.re, p.eps
        )));
    }
    Ok(sz)
}

/// `h_n(z) = f_n(z)/sin π(z − n) ≈ Φ(√z − √n)/√n` and its heuristic error.
pub fn h_phi_approx(n: usize, z: Complex64, p: &ApproxParams) -> Result<(Complex64, f64)> {
    let sz = check_region(n, z, p)?;
    let rn = (n as f64).sqrt();
    let w = sz - rn;
    let err = p.c * (PI * 3f64.sqrt() * (rn / 3.0 - sz.re)).exp();
    if w.norm() == 0.0 {
        return Err(Error::Pole(format!("h_n has a pole at z = n = {n}")));
    }
    Ok((default_phi().phi(w)? / rn, err))
}

/// `f_n(z)` from the approximation. Near `z = n` the pole of Φ is cancelled
/// analytically: `sin(πd)/(2πw√n) = sinc(d)(√z + √n)/(2√n)` with `d = z − n`.
pub fn eval_phi_approx(n: usize, z: Complex64, p: &ApproxParams) -> Result<EvalResult> {
    let sz = check_region(n, z, p)?;
    let rn = (n as f64).sqrt();
    let d = z - n as f64;
    let w = sz - rn;
    let s = (PI * d).sin();
    let sinc = if d.norm() < 1e-8 { Complex64::new(1.0, 0.0) - (PI * d).powi(2) / 6.0 } else { s / (PI * d) };
    let value = sinc * (sz + rn) / (2.0 * rn) + s * phi_regular(w)? / rn;
    let err = p.c * (PI * 3f64.sqrt() * (rn / 3.0 - sz.re)).exp() * s.norm().max(1e-300);
    Ok(EvalResult { n, x: z, value, method: EvalMethod::PhiApprox, err })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outside_region_rejected() {
        let p = ApproxParams::default();
        assert!(eval_phi_approx(100, Complex64::new(5.0, 0.0), &p).is_err());
        assert!(eval_phi_approx(0, Complex64::new(5.0, 0.0), &p).is_err());
    }

    #[test]
    fn limit_at_n_is_one() {
        let p = ApproxParams::default();
        let at = eval_phi_approx(50, Complex64::new(50.0, 0.0), &p).unwrap();
        assert!((at.value.re - 1.0).abs() < 1e-12);
        for d in [-1e-4, 1e-4] {
            let v = eval_phi_approx(50, Complex64::new(50.0 + d, 0.0), &p).unwrap();
            assert!((v.value.re - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn quotient_matches_value() {
        let p = ApproxParams::default();
        let z = Complex64::new(57.3, 0.0);
        let (h, _) = h_phi_approx(50, z, &p).unwrap();
        let f = eval_phi_approx(50, z, &p).unwrap().value;
        let s = (PI * (z - 50.0)).sin();
        assert!((f - s * h).norm() < 1e-12);
    }
}
