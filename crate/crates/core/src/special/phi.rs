//! The function `Φ(z) = Σ_{ν≥0} e^{−2πz√(2(ν+3/8))}/√(2(ν+3/8))` and its
//! meromorphic continuation.

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use super::hurwitz::{hurwitz_reflected_ladder_mp, hurwitz_zeta_mp};
use super::psi::PsiEvaluator;
use crate::error::{Error, Result};

/// Region used to evaluate Φ at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiRegion {
    Direct,
    Taylor,
    FunctionalEquation,
}

/// Taylor coefficients `c_k = 2^{(k−1)/2} ζ((1−k)/2, 3/8) (−2π)^k / k!`.
#[derive(Debug)]
struct TaylorTable {
    prec: u32,
    coeffs: Vec<Float>,
}

fn build_coefficients(len: usize, prec: u32) -> Vec<Float> {
    let wp = prec + 16;
    let mut zetas = vec![
        hurwitz_zeta_mp(&Float::with_val(wp, 0.5), &(Float::with_val(wp, 3) / 8u32), wp),
        Float::with_val(wp, 0.125),
    ];
    // ζ((1−k)/2, 3/8) = ζ(1 − s, 3/8) with s = (k+1)/2
    if len > 2 {
        zetas.extend(hurwitz_reflected_ladder_mp(3, 8, 3, len - 2, wp));
    }
    zetas.into_iter().take(len).enumerate().map(|(k, z)| taylor_coefficient(k, z, prec)).collect()
}

fn taylor_coefficient(k: usize, zeta: Float, prec: u32) -> Float {
    let wp = prec + 16;
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let mut c = Float::with_val(wp, 2).pow(Float::with_val(wp, k as f64 - 1.0) / 2u32);
    c *= zeta;
    c *= Float::with_val(wp, (&two_pi).pow(k as u32));
    let fact = Float::with_val(wp, rug::Integer::from(rug::Integer::factorial(k as u32)));
    c /= fact;
    if k % 2 == 1 {
        c = -c;
    }
    Float::with_val(prec, c)
}

/// Evaluator for Φ with three regimes.
///
/// `Re z ≥ r_direct` sums the defining series; `|Re z| < r_direct` uses the
/// Laurent expansion at 0 in multiple precision; `Re z ≤ −r_direct` uses
/// `Φ(z) = Ψ(z²) − Φ(−z)`.
pub struct PhiEvaluator {
    pub r_direct: f64,
    pub r_taylor: f64,
    pub k_max: usize,
    table: RwLock<Option<Arc<TaylorTable>>>,
    psi: PsiEvaluator,
}

impl Default for PhiEvaluator {
    fn default() -> Self {
        PhiEvaluator::new(0.25, 6.0, 200)
    }
}

impl PhiEvaluator {
    pub fn new(r_direct: f64, r_taylor: f64, k_max: usize) -> Self {
        PhiEvaluator { r_direct, r_taylor, k_max, table: RwLock::new(None), psi: PsiEvaluator::default() }
    }

    pub fn psi_evaluator(&self) -> &PsiEvaluator {
        &self.psi
    }

    /// Taylor coefficients as doubles (for inspection).
    pub fn taylor_coefficients(&self, count: usize) -> Vec<f64> {
        let t = self.table_for(count, 128);
        t.coeffs[..count].iter().map(Float::to_f64).collect()
    }

    fn table_for(&self, k: usize, prec: u32) -> Arc<TaylorTable> {
        if let Some(t) = self.table.read().expect("phi table poisoned").as_ref() {
            if t.coeffs.len() >= k && t.prec >= prec {
                return t.clone();
            }
        }
        let mut guard = self.table.write().expect("phi table poisoned");
        if let Some(t) = guard.as_ref() {
            if t.coeffs.len() >= k && t.prec >= prec {
                return t.clone();
            }
        }
        let (old_len, old_prec) = guard.as_ref().map_or((0, 0), |t| (t.coeffs.len(), t.prec));
        let len = k.max(self.k_max).max(old_len).next_power_of_two();
        let prec = prec.max(old_prec).next_power_of_two().max(128);
        let coeffs = build_coefficients(len, prec);
        let t = Arc::new(TaylorTable { prec, coeffs });
        *guard = Some(t.clone());
        t
    }

    pub fn region(&self, z: Complex64) -> PhiRegion {
        if z.re >= self.r_direct {
            PhiRegion::Direct
        } else if z.re <= -self.r_direct {
            PhiRegion::FunctionalEquation
        } else {
            PhiRegion::Taylor
        }
    }

    pub fn phi(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() == 0.0 {
            return Err(Error::Pole("Φ has a pole at z = 0".into()));
        }
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("non-finite argument"));
        }
        match self.region(z) {
            PhiRegion::Direct => Ok(phi_direct(z)),
            PhiRegion::Taylor => self.phi_taylor(z),
            PhiRegion::FunctionalEquation => {
                let psi = self.psi.psi_complex(z * z)?;
                Ok(psi - phi_direct(-z))
            }
        }
    }

    /// Laurent expansion `1/(2πz) + Σ c_k z^k`, precision and length chosen from `|z|`.
    pub fn phi_taylor(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() == 0.0 {
            return Err(Error::Pole("Φ has a pole at z = 0".into()));
        }
        Ok(Complex64::new(1.0, 0.0) / (2.0 * PI * z) + self.taylor_sum(z)?)
    }

    /// `Φ(z) − 1/(2πz)`, entire; the Taylor sum near 0, otherwise the dispatched value
    /// minus the pole term.
    pub fn phi_regular(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() <= self.r_taylor && z.re.abs() < 1.0 {
            self.taylor_sum(z)
        } else {
            Ok(self.phi(z)? - Complex64::new(1.0, 0.0) / (2.0 * PI * z))
        }
    }

    /// `Σ c_k z^k` in multiple precision.
    fn taylor_sum(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("non-finite argument"));
        }
        let r = z.norm();
        if r == 0.0 {
            return Ok(Complex64::new(self.taylor_coefficients(1)[0], 0.0));
        }
        // terms peak with size ≈ e^{π r²}
        let growth_bits = (PI * r * r / std::f64::consts::LN_2).ceil() as u32;
        let prec = 96 + growth_bits;
        // |c_k z^k| ≈ (2πe r²/k)^{k/2}: below 1 past k = 2πe r², negligible by 1.5 times that
        let k_needed = ((3.0 * std::f64::consts::E * PI * r * r) as usize + 100).max(self.k_max.min(64));
        let table = self.table_for(k_needed, prec);
        let wp = table.prec;
        let zc = Complex::with_val(wp, (z.re, z.im));
        let mut sum = Complex::new(wp);
        let mut zk = Complex::with_val(wp, 1);
        // terms past the peak decay super-exponentially; stop once they are
        // negligible against the running sum (or against 1 when it is small)
        let tol = Float::with_val(wp, 1) >> 80i32;
        let mut small_run = 0;
        let mut peak = Float::new(wp);
        for (k, c) in table.coeffs.iter().enumerate() {
            let term = Complex::with_val(wp, &zk * c);
            let mag = Float::with_val(wp, term.abs_ref());
            if mag > peak {
                peak = mag.clone();
            }
            sum += &term;
            zk *= &zc;
            let scale = Float::with_val(wp, sum.abs_ref()).max(&Float::with_val(wp, 1));
            if k > 8 && mag < peak && mag <= Float::with_val(wp, &scale * &tol) {
                small_run += 1;
                if small_run >= 4 {
                    return Ok(Complex64::new(sum.real().to_f64(), sum.imag().to_f64()));
                }
            } else {
                small_run = 0;
            }
        }
        Err(Error::Tolerance {
            msg: format!("Taylor series for Φ did not converge at |z| = {r}"),
            best_re: sum.real().to_f64(),
            best_im: sum.imag().to_f64(),
            err: f64::NAN,
        })
    }
}

/// The defining series, valid for `Re z > 0`.
pub fn phi_direct(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut nu = 0.0f64;
    loop {
        let u = (2.0 * (nu + 0.375)).sqrt();
        let t = (-2.0 * PI * z * u).exp() / u;
        sum += t;
        if t.norm() <= 1e-18 * sum.norm() || (t.norm() < 1e-300) {
            return sum;
        }
        nu += 1.0;
    }
}
