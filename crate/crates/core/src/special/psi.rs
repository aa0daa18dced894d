//! `Ψ(x) = Σ_{n≥1} 2cos(π((3n−1)/4 − x/n))/√n` and the complex sum `Θ(x)`,
//! whose real part is `Ψ(x)/2`.
//!
//! The series converges only conditionally. Terms up to `M = max(M₀, βx)` are
//! summed directly; the tail is resummed by repeated summation by parts over
//! the period-8 phase `e^{iπ(3n−1)/4}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Period of the phase `e^{iπ(3n−1)/4}`.
pub const BLOCK_SIZE: usize = 8;

#[derive(Clone, Copy, Debug)]
pub struct PsiEvaluator {
    pub beta: f64,
    pub depth: usize,
    pub min_terms: usize,
}

impl Default for PsiEvaluator {
    fn default() -> Self {
        PsiEvaluator { beta: 4.0, depth: 3, min_terms: 4000 }
    }
}

/// Partial sum of Θ up to `y` and the resummed tail beyond it.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThetaSum {
    pub partial: Complex64,
    pub tail: Complex64,
}

impl ThetaSum {
    pub fn total(&self) -> Complex64 {
        self.partial + self.tail
    }
}

fn phase_table(sign: f64) -> [Complex64; BLOCK_SIZE] {
    // entry r holds e^{±iπ(3n−1)/4} for n ≡ r (mod 8)
    std::array::from_fn(|r| Complex64::from_polar(1.0, sign * PI * (3.0 * r as f64 - 1.0) / 4.0))
}

/// `Σ_{n>m} c_n h(n)` for a mean-zero period-8 sequence `c`, by `depth` rounds of
/// summation by parts; `h` is sampled at `m+1, …, m+1+depth`.
fn periodic_tail(c: [Complex64; BLOCK_SIZE], m: usize, depth: usize, h: impl Fn(f64) -> Complex64) -> Complex64 {
    let samples: Vec<Complex64> = (0..=depth).map(|i| h((m + 1 + i) as f64)).collect();
    let mut c = c;
    // hk[i] = h_k(m + 1 + i), h_{k+1}(n) = h_k(n) − h_k(n + 1)
    let mut hk = samples;
    let mut total = Complex64::new(0.0, 0.0);
    for _ in 0..depth {
        let mut cum = [Complex64::new(0.0, 0.0); BLOCK_SIZE];
        let mut acc = Complex64::new(0.0, 0.0);
        // cum[r] = Σ_{j=1}^{r} c_j for r = 0..7, i.e. C(n) for n ≡ r (mod 8)
        for r in 1..BLOCK_SIZE {
            acc += c[r];
            cum[r] = acc;
        }
        let mu: Complex64 = cum.iter().sum::<Complex64>() / BLOCK_SIZE as f64;
        total += (mu - cum[m % BLOCK_SIZE]) * hk[0];
        for r in 0..BLOCK_SIZE {
            c[r] = cum[r] - mu;
        }
        hk = hk.windows(2).map(|w| w[0] - w[1]).collect();
    }
    total
}

impl PsiEvaluator {
    fn cutoff(&self, x: f64) -> usize {
        (self.beta * x.abs()).ceil().max(self.min_terms as f64) as usize
    }

    /// `Θ_y` split at `y_cut`: the direct partial sum and the resummed tail.
    pub fn theta_sum(&self, x: f64, y_cut: f64) -> ThetaSum {
        let m = y_cut.max(1.0).floor() as usize;
        let ph = phase_table(1.0);
        let mut partial = Complex64::new(0.0, 0.0);
        for n in 1..=m {
            let nf = n as f64;
            let (s, c) = (PI * x / nf).sin_cos();
            partial += ph[n % BLOCK_SIZE] * Complex64::new(c, -s) / nf.sqrt();
        }
        let tail = periodic_tail(ph, m, self.depth, |n| Complex64::from_polar(1.0 / n.sqrt(), -PI * x / n));
        ThetaSum { partial, tail }
    }

    /// Θ(x) with the default cutoff.
    pub fn theta(&self, x: f64) -> Complex64 {
        self.theta_sum(x, self.cutoff(x) as f64).total()
    }

    /// Ψ(x) for real `x` by the accelerated sum.
    pub fn psi(&self, x: f64) -> f64 {
        2.0 * self.theta(x).re
    }

    /// Ψ(w) for complex `w`, splitting `2cos` into its two exponentials.
    pub fn psi_complex(&self, w: Complex64) -> Result<Complex64> {
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::invalid("non-finite argument"));
        }
        if w.im == 0.0 {
            return Ok(Complex64::new(self.psi(w.re), 0.0));
        }
        let m = self.cutoff(w.norm());
        let i = Complex64::new(0.0, 1.0);
        let (pp, pm) = (phase_table(1.0), phase_table(-1.0));
        let mut direct = Complex64::new(0.0, 0.0);
        for n in 1..=m {
            let nf = n as f64;
            let e = (-i * PI * w / nf).exp();
            direct += (pp[n % BLOCK_SIZE] * e + pm[n % BLOCK_SIZE] / e) / nf.sqrt();
        }
        let tp = periodic_tail(pp, m, self.depth, |n| (-i * PI * w / n).exp() / n.sqrt());
        let tm = periodic_tail(pm, m, self.depth, |n| (i * PI * w / n).exp() / n.sqrt());
        Ok(direct + tp + tm)
    }
}

/// `∫_T^{2T} Ψ(x)² dx` and its normalization by `T log T`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PsiMoment {
    pub t: f64,
    pub integral: f64,
    pub normalized: f64,
    pub panels: usize,
    pub err: f64,
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (z, 1.0) } else { (p1, p0) };
            let dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=n {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let (qn, qn1) = if n == 1 { (z, 1.0) } else { (q1, q0) };
                let d = n as f64 * (z * qn - qn1) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * d * d);
                break;
            }
        }
    }
    (x, w)
}

/// Second moment over `[T, 2T]` with unit Gauss–Legendre panels.
///
/// The error estimate compares 8- and 6-point rules on every 16th panel and
/// scales the discrepancy to the full range.
pub fn psi_second_moment(ev: &PsiEvaluator, t: f64) -> Result<PsiMoment> {
    if !(t > 1.0) {
        return Err(Error::invalid(format!("T = {t} must exceed 1")));
    }
    let panels = t.ceil() as usize;
    let h = t / panels as f64;
    let (x8, w8) = gauss_legendre(8);
    let (x6, w6) = gauss_legendre(6);
    let panel = |p: usize, xs: &[f64], ws: &[f64]| -> f64 {
        let a = t + p as f64 * h;
        xs.iter()
            .zip(ws)
            .map(|(x, w)| {
                let v = ev.psi(a + 0.5 * h * (x + 1.0));
                w * v * v
            })
            .sum::<f64>()
            * 0.5
            * h
    };
    let integral: f64 = (0..panels).into_par_iter().map(|p| panel(p, &x8, &w8)).sum();
    let sampled: Vec<usize> = (0..panels).step_by(16).collect();
    let diff: f64 = sampled
        .par_iter()
        .map(|&p| (panel(p, &x8, &w8) - panel(p, &x6, &w6)).abs())
        .sum();
    let err = diff * panels as f64 / sampled.len() as f64;
    Ok(PsiMoment { t, integral, normalized: integral / (t * t.ln()), panels, err })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let int = |k: i32| x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum::<f64>();
        assert!((int(0) - 2.0).abs() < 1e-14);
        assert!((int(14) - 2.0 / 15.0).abs() < 1e-14);
        assert!(int(7).abs() < 1e-14);
    }

    #[test]
    fn tail_of_mean_zero_sequence() {
        // Σ_{n>m} (−1)^n/n^{1/2}-style check with period 8 phases against a long direct sum
        let ph = phase_table(1.0);
        let m = 2000;
        let tail = periodic_tail(ph, m, 3, |n| Complex64::new(1.0 / n.sqrt(), 0.0));
        let mut direct = Complex64::new(0.0, 0.0);
        let big = 4_000_000usize;
        let mut partials = Vec::new();
        for n in m + 1..=big {
            direct += ph[n % 8] / (n as f64).sqrt();
            if n + 8 > big {
                partials.push(direct);
            }
        }
        // Cesàro over one period removes the oscillation of the partial sums
        let avg: Complex64 = partials.iter().sum::<Complex64>() / partials.len() as f64;
        assert!((tail - avg).norm() < 1e-9, "{tail} vs {avg}");
    }

    #[test]
    fn psi_100_matches_long_partial_sum() {
        let ev = PsiEvaluator::default();
        let x = 100.0;
        let n_max = 10_000_000usize;
        let mut s = 0.0;
        let mut last = Vec::new();
        for n in 1..=n_max {
            let nf = n as f64;
            s += 2.0 * (PI * ((3.0 * nf - 1.0) / 4.0 - x / nf)).cos() / nf.sqrt();
            if n + 8 > n_max {
                last.push(s);
            }
        }
        let cesaro = last.iter().sum::<f64>() / last.len() as f64;
        let v = ev.psi(x);
        assert!((v - cesaro).abs() < 1e-8, "{v} vs {cesaro}");
    }

    #[test]
    fn complex_argument_reduces_to_real() {
        let ev = PsiEvaluator::default();
        let a = ev.psi(7.3);
        let b = ev.psi_complex(Complex64::new(7.3, 1e-300)).unwrap();
        assert!((a - b.re).abs() < 1e-10);
    }
}
