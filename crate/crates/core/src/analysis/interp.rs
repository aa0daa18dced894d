//! Check of the interpolation formula on `G_t(x) = e^{−πtx²} + t^{−1/2}e^{−πx²/t}`,
//! which equals its own Fourier transform.

use serde::Serialize;
use std::f64::consts::PI;

use crate::basis::CollocationSolver;
use crate::error::{Error, Result};

/// Truncation tail allowed for the samples `G_t(√n)`.
const TAIL: f64 = 1e-10;

pub fn gaussian_pair(t: f64, x: f64) -> f64 {
    (-PI * t * x * x).exp() + (-PI * x * x / t).exp() / t.sqrt()
}

/// Smallest `N` with `Σ_{n>N} G_t(√n) < 1e−10`, bounding each Gaussian tail by a geometric series.
pub fn default_truncation(t: f64) -> usize {
    let tail = |n: usize| {
        let g = |s: f64| {
            let q = (-PI * s).exp();
            (-PI * s * (n + 1) as f64).exp() / (1.0 - q)
        };
        g(t) + g(1.0 / t) / t.sqrt()
    };
    (1..).find(|&n| tail(n) < TAIL).expect("tail decays")
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpPoint {
    pub x: f64,
    pub exact: f64,
    pub approx: f64,
    pub err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpReport {
    pub t: f64,
    pub n_trunc: usize,
    pub max_err: f64,
    pub points: Vec<InterpPoint>,
}

/// `max_x |G_t(x) − Σ_{n≤N} G_t(√n) f_n(x²)|` over `xs`.
pub fn verify_interpolation(t: f64, xs: &[f64], n_trunc: Option<usize>) -> Result<InterpReport> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t = {t} must be positive")));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("grid contains a non-finite point"));
    }
    let n_trunc = n_trunc.unwrap_or_else(|| default_truncation(t));
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let x_max = sq.iter().copied().fold(0.0, f64::max);
    let solver = CollocationSolver::new(CollocationSolver::recommended_size(n_trunc, x_max))?;
    let cols = solver.solve_many(&sq, false)?;
    let samples: Vec<f64> = (0..=n_trunc).map(|n| gaussian_pair(t, (n as f64).sqrt())).collect();
    let points: Vec<InterpPoint> = xs
        .iter()
        .zip(cols)
        .map(|(&x, f)| {
            let approx: f64 = samples.iter().zip(&f).map(|(g, v)| g * v.re).sum();
            let exact = gaussian_pair(t, x);
            InterpPoint { x, exact, approx, err: (exact - approx).abs() }
        })
        .collect();
    let max_err = points.iter().map(|p| p.err).fold(0.0, f64::max);
    Ok(InterpReport { t, n_trunc, max_err, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_dual_gaussian() {
        // G_t is invariant under t ↦ 1/t up to the factor √t
        for x in [0.0, 0.4, 1.7] {
            assert!((gaussian_pair(4.0, x) * 2.0 - gaussian_pair(0.25, x)).abs() < 1e-15);
        }
    }

    #[test]
    fn truncation_rule() {
        let n = default_truncation(4.0);
        assert!(gaussian_pair(4.0, (n as f64).sqrt()) < TAIL);
        assert!(default_truncation(1.0) < n);
    }

    #[test]
    fn rejects_nonpositive_t() {
        assert!(verify_interpolation(0.0, &[0.5], None).is_err());
    }
}
