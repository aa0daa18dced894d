//! Double-precision evaluation of θ, λ, J, g_n and the kernel K.
//!
//! Every evaluation first reduces its argument into the fundamental domain.
//! Reduced points close to the cusps ±1 are moved to the cusp ∞ by
//! `σ = 1/(1 − τ)` (after `τ ↦ τ + 2` near −1), where the series in
//! `e^{2πiσ}` converge fast.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::expansions::q_poly;
use super::group::UpperHalfPoint;
use super::reduce::{reduce_to_fundamental, ReducedPoint};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Below this height a reduced point is handled through the cusp 1.
const CUSP_SWITCH: f64 = 0.75;

/// Stop summing once terms fall below 2⁻⁷⁰ of the partial sum.
const SERIES_EPS: f64 = 8.470329472543003e-22;

/// `Σ_{n∈ℤ} e^{πin²τ}`.
pub fn theta_series_value(tau: Complex64) -> Complex64 {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut n = 1.0f64;
    loop {
        let term = 2.0 * (I * PI * n * n * tau).exp();
        sum += term;
        if term.norm() <= SERIES_EPS * sum.norm() {
            return sum;
        }
        n += 1.0;
    }
}

/// `Σ_{k∈ℤ} e^{πi(k+1/2)²τ}`.
pub fn theta2_series_value(tau: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut k = 0.0f64;
    loop {
        let h = k + 0.5;
        let term = 2.0 * (I * PI * h * h * tau).exp();
        sum += term;
        if term.norm() <= SERIES_EPS * sum.norm() {
            return sum;
        }
        k += 1.0;
    }
}

/// Principal `(τ/i)^{1/2}`; `τ/i` has positive real part on the upper half-plane.
pub fn sqrt_tau_over_i(tau: Complex64) -> Complex64 {
    (tau / I).sqrt()
}

/// θ, λ, J and `1 − 2λ` at a point of the fundamental domain.
#[derive(Clone, Copy, Debug)]
struct DomainValues {
    theta: Complex64,
    lambda: Complex64,
    j: Complex64,
    one_minus_2lambda: Complex64,
}

fn domain_values(t: Complex64) -> DomainValues {
    if t.im >= CUSP_SWITCH {
        let th = theta_series_value(t);
        let th2 = theta2_series_value(t);
        let lambda = (th2 / th).powi(4);
        let j = 16.0 / (lambda * (1.0 - lambda));
        return DomainValues { theta: th, lambda, j, one_minus_2lambda: 1.0 - 2.0 * lambda };
    }
    // near the cusp +1 (or −1, moved by +2)
    let t = if t.re < 0.0 { t + 2.0 } else { t };
    let sigma = 1.0 / (1.0 - t);
    let th = theta_series_value(sigma);
    let th2 = theta2_series_value(sigma);
    let ls = (th2 / th).powi(4);
    DomainValues {
        theta: sqrt_tau_over_i(sigma) * th2,
        lambda: (ls - 1.0) / ls,
        j: -16.0 * ls * ls / (1.0 - ls),
        one_minus_2lambda: (2.0 - ls) / ls,
    }
}

/// θ(τ) transported back along the reduction path.
fn theta_from(r: &ReducedPoint, reduced_theta: Complex64) -> Complex64 {
    let mut v = reduced_theta;
    for &p in r.inversion_points.iter().rev() {
        v /= sqrt_tau_over_i(p);
    }
    v
}

/// Jacobi θ(τ) = Σ e^{πin²τ}.
pub fn theta(tau: UpperHalfPoint) -> Complex64 {
    let r = reduce_to_fundamental(tau);
    let dv = domain_values(r.reduced.to_complex());
    theta_from(&r, dv.theta)
}

/// `(λ(τ), J(τ))`.
pub fn lambda_j(tau: UpperHalfPoint) -> (Complex64, Complex64) {
    let r = reduce_to_fundamental(tau);
    let dv = domain_values(r.reduced.to_complex());
    // λ(−1/τ) = 1 − λ(τ), λ(τ + 2) = λ(τ)
    let lambda = if r.inversions % 2 == 1 { 1.0 - dv.lambda } else { dv.lambda };
    (lambda, dv.j)
}

/// θ(τ), λ(τ), J(τ) and `1 − 2λ(τ)` in one reduction.
#[derive(Clone, Copy, Debug)]
pub struct ModularValues {
    pub theta: Complex64,
    pub lambda: Complex64,
    pub j: Complex64,
    pub one_minus_2lambda: Complex64,
}

pub fn modular_values(tau: UpperHalfPoint) -> ModularValues {
    let r = reduce_to_fundamental(tau);
    let dv = domain_values(r.reduced.to_complex());
    let odd = r.inversions % 2 == 1;
    ModularValues {
        theta: theta_from(&r, dv.theta),
        lambda: if odd { 1.0 - dv.lambda } else { dv.lambda },
        j: dv.j,
        one_minus_2lambda: if odd { -dv.one_minus_2lambda } else { dv.one_minus_2lambda },
    }
}

/// `g_n(τ) = θ³(τ)·Q_n(J(τ))` in double precision.
///
/// Suitable for moderate `n`; large `n` should use the multiprecision path.
pub fn g_value(n: usize, tau: UpperHalfPoint) -> Result<Complex64> {
    let c = q_poly(n)?;
    let mv = modular_values(tau);
    let mut acc = Complex64::new(0.0, 0.0);
    for ck in c.iter().rev() {
        acc = acc * mv.j + ck.to_f64();
    }
    Ok(mv.theta.powi(3) * acc)
}

/// Kernel `K(τ, z) = θ³(z)θ(τ)(1 − 2λ(τ))J(τ)/(J(τ) − J(z))`.
pub fn kernel_k(tau: UpperHalfPoint, z: UpperHalfPoint) -> Result<Complex64> {
    let a = modular_values(tau);
    let b = modular_values(z);
    let den = a.j - b.j;
    if den.norm() <= 1e-13 * (a.j.norm() + b.j.norm()) {
        return Err(Error::Pole(format!(
            "J(τ) = J(z) at τ = {:?}, z = {:?}",
            tau.to_complex(),
            z.to_complex()
        )));
    }
    Ok(b.theta.powi(3) * a.theta * a.one_minus_2lambda * a.j / den)
}
