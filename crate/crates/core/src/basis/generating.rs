//! The generating function `F(τ, x) = Σ f_n(x) e^{πinτ}`.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::collocation::CollocationSolver;
use crate::error::{Error, Result};
use crate::modular::pointwise::sqrt_tau_over_i;
use crate::modular::{kernel_k, UpperHalfPoint};
use crate::special::gauss_legendre;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GeneratingValue {
    pub value: Complex64,
    /// `|F(τ) + (τ/i)^{−1/2}F(−1/τ) − e^{πixτ} − (τ/i)^{−1/2}e^{−πix/τ}|`.
    pub feq_residual: f64,
}

fn partial_sum(f: &[f64], tau: Complex64) -> Complex64 {
    f.iter().enumerate().map(|(n, &c)| c * (Complex64::i() * PI * n as f64 * tau).exp()).sum()
}

/// `Σ_{n≤N} f_n(x) e^{πinτ}` with values from a collocation solve, and the
/// residual of the functional equation at τ.
pub fn generating_f(tau: UpperHalfPoint, x: f64, n_max: usize) -> Result<GeneratingValue> {
    let t = tau.to_complex();
    let inv = -1.0 / t;
    let height = t.im.min(inv.im);
    if (-PI * n_max as f64 * height).exp() > 1e-20 {
        return Err(Error::invalid(format!(
            "Im τ = {} and Im(−1/τ) = {} are too low for truncation at N = {n_max}",
            t.im, inv.im
        )));
    }
    let solver = CollocationSolver::new(CollocationSolver::recommended_size(n_max, x))?;
    let raw = solver.solve_many(&[x], false)?.pop().expect("one column");
    let f: Vec<f64> = raw[..=n_max].iter().map(|v| v.re).collect();
    let value = partial_sum(&f, t);
    let w = 1.0 / sqrt_tau_over_i(t);
    let lhs = value + w * partial_sum(&f, inv);
    let rhs = (Complex64::i() * PI * x * t).exp() + w * (-Complex64::i() * PI * x / t).exp();
    Ok(GeneratingValue { value, feq_residual: (lhs - rhs).norm() })
}

/// `½∫ K(τ, w) e^{πiwx} dw` over the upper unit semicircle, for τ in the
/// fundamental domain, with `panels` Gauss–Legendre panels of order 16 in the angle.
pub fn generating_f_kernel(tau: UpperHalfPoint, x: f64, panels: usize) -> Result<Complex64> {
    let t = tau.to_complex();
    if t.re.abs() > 1.0 || t.norm_sqr() < 1.0 {
        return Err(Error::invalid(format!("τ = {t} is not in the fundamental domain")));
    }
    let (gx, gw) = gauss_legendre(16);
    let h = PI / panels as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x0, w0) in gx.iter().zip(&gw) {
            let psi = mid + 0.5 * h * x0;
            let w = Complex64::from_polar(1.0, psi);
            let k = kernel_k(tau, UpperHalfPoint::new(w.re, w.im)?)?;
            // dw = i w dψ, traversed from ψ = π to 0
            sum -= k * (Complex64::i() * PI * w * x).exp() * Complex64::i() * w * (0.5 * h * w0);
        }
    }
    Ok(0.5 * sum)
}
