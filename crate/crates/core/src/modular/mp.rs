//! Multiprecision evaluation of θ, J and g_n on the closure of the
//! fundamental domain, used by the contour quadrature.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::expansions::q_poly;
use crate::error::Result;

const CUSP_SWITCH: f64 = 0.75;

fn cx(prec: u32) -> Complex {
    Complex::new(prec)
}

/// `e^{πiτ·s}` at the working precision.
fn exp_pi_i(tau: &Complex, s: f64, prec: u32) -> Complex {
    let pi = Float::with_val(prec, Constant::Pi);
    let mut arg = Complex::with_val(prec, tau * &pi);
    arg *= s;
    arg.mul_i_mut(false);
    arg.exp()
}

fn tiny(prec: u32) -> Float {
    Float::with_val(prec, 1) >> (prec as i32 + 8)
}

/// θ(τ) = Σ e^{πin²τ} by the term recurrence `t_{n+1} = t_n q^{n+1/2}`.
pub fn theta_mp(tau: &Complex, prec: u32) -> Complex {
    let q = exp_pi_i(tau, 2.0, prec);
    let mut ratio = exp_pi_i(tau, 1.0, prec);
    let mut term = Complex::with_val(prec, 1);
    let mut sum = Complex::with_val(prec, 1);
    let eps = tiny(prec);
    loop {
        term *= &ratio;
        ratio *= &q;
        let t2 = Complex::with_val(prec, &term * 2u32);
        sum += &t2;
        if Float::with_val(prec, t2.abs_ref()) < Float::with_val(prec, sum.abs_ref()) * &eps {
            return sum;
        }
    }
}

/// θ₂(τ) = Σ e^{πi(k+1/2)²τ}.
pub fn theta2_mp(tau: &Complex, prec: u32) -> Complex {
    let q = exp_pi_i(tau, 2.0, prec);
    let mut term = exp_pi_i(tau, 0.25, prec);
    let mut ratio = q.clone();
    let mut sum = cx(prec);
    let eps = tiny(prec);
    loop {
        let t2 = Complex::with_val(prec, &term * 2u32);
        sum += &t2;
        if Float::with_val(prec, t2.abs_ref()) < Float::with_val(prec, sum.abs_ref()) * &eps {
            return sum;
        }
        term *= &ratio;
        ratio *= &q;
    }
}

/// θ(τ) and J(τ) for τ with `|Re τ| ≤ 1`, `|τ| ≥ 1` (up to rounding).
pub fn theta_j_mp(tau: &Complex, prec: u32) -> (Complex, Complex) {
    let im = tau.imag().to_f64();
    if im >= CUSP_SWITCH {
        let th = theta_mp(tau, prec);
        let th2 = theta2_mp(tau, prec);
        let lambda = Complex::with_val(prec, &th2 / &th).pow(4u32);
        let one_minus = Complex::with_val(prec, 1 - &lambda);
        let den = Complex::with_val(prec, &lambda * &one_minus);
        let j = Complex::with_val(prec, 16u32 / den);
        return (th, j);
    }
    let mut t = tau.clone();
    if t.real().is_sign_negative() {
        t += 2u32;
    }
    let one_minus_t = Complex::with_val(prec, 1 - &t);
    let sigma = Complex::with_val(prec, 1 / one_minus_t);
    let th = theta_mp(&sigma, prec);
    let th2 = theta2_mp(&sigma, prec);
    let ls = Complex::with_val(prec, &th2 / &th).pow(4u32);
    // θ(1 − 1/σ) = (σ/i)^{1/2}θ₂(σ), J(1 − 1/σ) = −16λ²/(1 − λ)
    let mut s_over_i = sigma.clone();
    s_over_i.mul_i_mut(true);
    let theta = Complex::with_val(prec, s_over_i.sqrt() * &th2);
    let ls2 = Complex::with_val(prec, ls.square_ref());
    let den = Complex::with_val(prec, 1 - &ls);
    let mut j = Complex::with_val(prec, ls2 / den);
    j *= -16i32;
    (theta, j)
}

/// Coefficients of `Q_n` as floats at the given precision.
pub fn q_poly_float(n: usize, prec: u32) -> Result<Vec<Float>> {
    Ok(q_poly(n)?.iter().map(|c| Float::with_val(prec, c)).collect())
}

/// `g_n(τ) = θ³Q_n(J)` for τ in the closure of the fundamental domain.
pub fn g_value_mp(coeffs: &[Float], tau: &Complex, prec: u32) -> Complex {
    let (th, j) = theta_j_mp(tau, prec);
    let mut acc = cx(prec);
    for c in coeffs.iter().rev() {
        acc *= &j;
        acc += c;
    }
    let th3 = Complex::with_val(prec, th.pow(3u32));
    acc * th3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::group::UpperHalfPoint;
    use crate::modular::pointwise;
    use num_complex::Complex64;

    #[test]
    fn matches_double_precision() {
        for &(re, im) in &[(0.0, 1.0), (0.3, 1.2), (0.8, 0.62), (-0.9, 0.45), (0.99, 0.15)] {
            let tau = Complex::with_val(200, (re, im));
            let (th, j) = theta_j_mp(&tau, 200);
            let mv = pointwise::modular_values(UpperHalfPoint::new(re, im).unwrap());
            let th64 = Complex64::new(th.real().to_f64(), th.imag().to_f64());
            let j64 = Complex64::new(j.real().to_f64(), j.imag().to_f64());
            assert!((th64 - mv.theta).norm() < 1e-12 * mv.theta.norm(), "θ at {re}+{im}i");
            assert!((j64 - mv.j).norm() < 1e-10 * (1.0 + mv.j.norm()), "J at {re}+{im}i");
        }
    }

    #[test]
    fn g1_at_i() {
        // J(i) = 64, so g_1(i) = θ(i)³·34
        let c = q_poly_float(1, 128).unwrap();
        let tau = Complex::with_val(128, (0, 1));
        let g = g_value_mp(&c, &tau, 128);
        let th = pointwise::theta(UpperHalfPoint::new(0.0, 1.0).unwrap());
        let expected = th.powi(3) * 34.0;
        assert!((g.real().to_f64() - expected.re).abs() < 1e-12 * expected.re);
        assert!(g.imag().to_f64().abs() < 1e-12);
    }
}
