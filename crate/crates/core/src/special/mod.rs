//! Special functions: Hurwitz zeta, Φ and the exponential sum Ψ.

pub mod hurwitz;
pub mod phi;
pub mod psi;

use num_complex::Complex64;
use std::sync::OnceLock;

pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_mp};
pub use phi::{phi_direct, PhiEvaluator, PhiRegion};
pub use psi::{gauss_legendre, psi_second_moment, PsiEvaluator, PsiMoment, ThetaSum};

use crate::error::Result;

/// Process-wide evaluator with default thresholds; its Taylor table is shared.
pub fn default_phi() -> &'static PhiEvaluator {
    static PHI: OnceLock<PhiEvaluator> = OnceLock::new();
    PHI.get_or_init(PhiEvaluator::default)
}

pub fn phi(z: Complex64) -> Result<Complex64> {
    default_phi().phi(z)
}

/// Ψ(x) for any real `x`; `|x| < 1` goes through `Φ(√x) + Φ(−√x)`.
pub fn psi(x: f64) -> Result<f64> {
    let ev = default_phi();
    if x.abs() >= 1.0 {
        return Ok(ev.psi_evaluator().psi(x));
    }
    if x == 0.0 {
        return Ok(2.0 * ev.taylor_coefficients(1)[0]);
    }
    let r = Complex64::new(x, 0.0).sqrt();
    Ok((ev.phi(r)? + ev.phi(-r)?).re)
}
