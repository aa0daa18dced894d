//! Collocation solve of the functional equation of the generating function.
//!
//! With `F(τ, x) = Σ f_n(x) e^{πinτ}` truncated at `n = N`, the relation
//! `F(τ) + (τ/i)^{−1/2} F(−1/τ) = e^{πixτ} + (τ/i)^{−1/2} e^{−πix/τ}` is imposed
//! at `N + 1` points on a horizontal segment. The matrix depends only on the
//! nodes, so it is factored once and reused for every `x`.

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{integer_distance, EvalMethod, EvalResult};
use crate::error::{Error, Result};
use crate::modular::pointwise::sqrt_tau_over_i;

/// Solves are refused when the equilibrated condition estimate exceeds this.
pub const MAX_CONDITION: f64 = 1e12;

/// Minimum truncation accepted by [`CollocationSolver::new`].
pub const MIN_SIZE: usize = 8;

/// Right-hand sides per block in batched solves.
const BLOCK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverMeta {
    #[serde(rename = "N")]
    pub size: usize,
    pub height: f64,
    pub cond_estimate: f64,
}

pub struct CollocationSolver {
    size: usize,
    height: f64,
    nodes: Vec<Complex64>,
    /// `(τ_j/i)^{−1/2}`
    weights: Vec<Complex64>,
    /// Column scales of the equilibrated matrix.
    scale: Vec<f64>,
    lu: PartialPivLu<Complex64>,
    cond_estimate: f64,
}

impl std::fmt::Debug for CollocationSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CollocationSolver").field("meta", &self.meta()).finish()
    }
}

fn one_norm(m: &Mat<Complex64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Hager–Higham estimate of `‖A⁻¹‖₁` from a handful of solves with `A` and `A^H`.
fn inverse_one_norm(lu: &PartialPivLu<Complex64>, dim: usize) -> f64 {
    let col = |v: Vec<Complex64>| Mat::<Complex64>::from_fn(dim, 1, |i, _| v[i]);
    let l1 = |m: &Mat<Complex64>| (0..dim).map(|i| m[(i, 0)].norm()).sum::<f64>();
    let mut x = col(vec![Complex64::new(1.0 / dim as f64, 0.0); dim]);
    let mut est = 0.0;
    for iter in 0..5 {
        let mut y = x.clone();
        lu.solve_in_place(&mut y);
        let e = l1(&y);
        if iter > 0 && e <= est {
            break;
        }
        est = e;
        let mut z = Mat::<Complex64>::from_fn(dim, 1, |i, _| {
            let v = y[(i, 0)];
            if v.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { v / v.norm() }
        });
        lu.solve_adjoint_in_place(&mut z);
        let (j, zmax) = (0..dim)
            .map(|i| (i, z[(i, 0)].norm()))
            .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        let zx: f64 = (0..dim).map(|i| (z[(i, 0)].conj() * x[(i, 0)]).re).sum();
        if iter > 0 && zmax <= zx {
            break;
        }
        x = Mat::<Complex64>::zeros(dim, 1);
        x[(j, 0)] = Complex64::new(1.0, 0.0);
    }
    // alternating test vector guards against the estimate stalling
    let denom = (dim.max(2) - 1) as f64;
    let mut b = col(
        (0..dim)
            .map(|i| Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 } * (1.0 + i as f64 / denom), 0.0))
            .collect(),
    );
    lu.solve_in_place(&mut b);
    est.max(2.0 * l1(&b) / (3.0 * dim as f64))
}

impl CollocationSolver {
    /// Solver with the default height `10/N`.
    pub fn new(size: usize) -> Result<Self> {
        Self::with_height(size, 10.0 / size as f64)
    }

    pub fn with_height(size: usize, height: f64) -> Result<Self> {
        if size < MIN_SIZE {
            return Err(Error::invalid(format!("N = {size} is below the minimum {MIN_SIZE}")));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::invalid(format!("height {height} must be positive")));
        }
        let nodes: Vec<Complex64> = (0..=size)
            .map(|j| Complex64::new(-1.0 + 2.0 * j as f64 / size as f64, height))
            .collect();
        let weights: Vec<Complex64> = nodes.iter().map(|&t| 1.0 / sqrt_tau_over_i(t)).collect();
        let dim = size + 1;
        let mut m = Mat::<Complex64>::from_fn(dim, dim, |j, n| {
            basis_entry(nodes[j], weights[j], n as f64)
        });
        let mut scale = vec![0.0; dim];
        for (n, s) in scale.iter_mut().enumerate() {
            *s = (0..dim).map(|j| m[(j, n)].norm()).fold(0.0, f64::max);
            if *s == 0.0 || !s.is_finite() {
                return Err(Error::IllConditioned { cond: f64::INFINITY, limit: MAX_CONDITION });
            }
            for j in 0..dim {
                m[(j, n)] /= *s;
            }
        }
        let lu = m.partial_piv_lu();
        let cond_estimate = one_norm(&m) * inverse_one_norm(&lu, dim);
        if !(cond_estimate <= MAX_CONDITION) {
            return Err(Error::IllConditioned { cond: cond_estimate, limit: MAX_CONDITION });
        }
        Ok(CollocationSolver { size, height, nodes, weights, scale, lu, cond_estimate })
    }

    /// Truncation large enough to trust `f_n` for `n ≤ n_max` and arguments up to `x_max`.
    pub fn recommended_size(n_max: usize, x_max: f64) -> usize {
        let by_n = (n_max + 50).max((1.2 * n_max as f64).ceil() as usize);
        let by_x = (1.2 * x_max.max(0.0)).ceil() as usize + 50;
        by_n.max(by_x).max(MIN_SIZE)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn cond_estimate(&self) -> f64 {
        self.cond_estimate
    }

    pub fn meta(&self) -> SolverMeta {
        SolverMeta { size: self.size, height: self.height, cond_estimate: self.cond_estimate }
    }

    /// Largest index whose value is trusted: `N − max(50, N/6)`, clamped at 0.
    pub fn trusted_max(&self) -> usize {
        let buffer = 50usize.max(self.size / 6);
        self.size.saturating_sub(buffer)
    }

    /// Largest `x` for which the right-hand side is resolved.
    pub fn trusted_x(&self) -> f64 {
        (self.size as f64 - 50.0) / 1.2
    }

    fn rhs_column(&self, x: f64, derivative: bool) -> impl Iterator<Item = Complex64> + '_ {
        self.nodes.iter().zip(&self.weights).map(move |(&t, &w)| {
            let a = (Complex64::i() * PI * x * t).exp();
            let b = (-Complex64::i() * PI * x / t).exp();
            if derivative {
                Complex64::i() * PI * (t * a - w * b / t)
            } else {
                a + w * b
            }
        })
    }

    /// Raw complex solutions, one vector of length `N + 1` per `x`.
    ///
    /// With `derivative` the right-hand side is differentiated in `x`, giving `f_n'(x)`.
    pub fn solve_many(&self, xs: &[f64], derivative: bool) -> Result<Vec<Vec<Complex64>>> {
        if let Some(&x) = xs.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::invalid(format!("collocation needs finite x ≥ 0, got {x}")));
        }
        let dim = self.size + 1;
        let blocks: Vec<Vec<Vec<Complex64>>> = xs
            .par_chunks(BLOCK)
            .map(|chunk| {
                let mut rhs = Mat::<Complex64>::zeros(dim, chunk.len());
                for (c, &x) in chunk.iter().enumerate() {
                    for (j, v) in self.rhs_column(x, derivative).enumerate() {
                        rhs[(j, c)] = v;
                    }
                }
                self.lu.solve_in_place(&mut rhs);
                (0..chunk.len())
                    .map(|c| (0..dim).map(|n| rhs[(n, c)] / self.scale[n]).collect())
                    .collect()
            })
            .collect();
        Ok(blocks.into_iter().flatten().collect())
    }

    fn results(&self, x: f64, raw: Vec<Complex64>) -> Vec<EvalResult> {
        let trusted = self.trusted_max();
        raw.into_iter()
            .enumerate()
            .map(|(n, v)| EvalResult {
                n,
                x: Complex64::new(x, 0.0),
                value: Complex64::new(v.re, 0.0),
                method: EvalMethod::Collocation,
                err: if n <= trusted { v.im.abs() } else { f64::INFINITY },
            })
            .collect()
    }

    /// `f_n(x)` for `n = 0..=N`. Entries above [`trusted_max`](Self::trusted_max)
    /// carry an infinite error.
    pub fn eval_all(&self, x: f64) -> Result<Vec<EvalResult>> {
        let raw = self.solve_many(&[x], false)?.pop().expect("one column");
        Ok(self.results(x, raw))
    }

    /// `f_n'(x)` for `n = 0..=N`.
    pub fn eval_all_derivative(&self, x: f64) -> Result<Vec<EvalResult>> {
        let raw = self.solve_many(&[x], true)?.pop().expect("one column");
        Ok(self.results(x, raw))
    }

    /// `f_n(x)` for every `x` in `xs`, indexed `[x][n]`.
    pub fn eval_batch(&self, xs: &[f64]) -> Result<Vec<Vec<EvalResult>>> {
        let raw = self.solve_many(xs, false)?;
        Ok(xs.iter().zip(raw).map(|(&x, r)| self.results(x, r)).collect())
    }

    /// `f_n(x)` for a single index.
    pub fn eval(&self, n: usize, x: f64) -> Result<EvalResult> {
        self.check_index(n)?;
        Ok(self.eval_all(x)?[n])
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.trusted_max() {
            return Err(Error::invalid(format!(
                "n = {n} exceeds the trusted range {} of N = {}",
                self.trusted_max(),
                self.size
            )));
        }
        Ok(())
    }

    /// `h_n(x) = f_n(x)/sin π(x − n)` with its error.
    ///
    /// At an integer the limit `f_n'(x)/(π cos π(x − n))` is used; elsewhere the
    /// quotient, whose error grows like `1/|sin π(x − n)|`.
    pub fn h_value(&self, n: usize, x: f64) -> Result<(f64, f64)> {
        self.h_values(n, &[x]).map(|v| v[0])
    }

    /// [`h_value`](Self::h_value) over a grid, batched.
    pub fn h_values(&self, n: usize, xs: &[f64]) -> Result<Vec<(f64, f64)>> {
        self.check_index(n)?;
        let (at_int, off): (Vec<f64>, Vec<f64>) = xs.iter().partition(|&&x| integer_distance(x) < 1e-12);
        let direct = self.solve_many(&off, false)?;
        let deriv = self.solve_many(&at_int, true)?;
        let (mut di, mut ii) = (direct.into_iter(), deriv.into_iter());
        Ok(xs
            .iter()
            .map(|&x| {
                let d = x - n as f64;
                if integer_distance(x) < 1e-12 {
                    let v = ii.next().expect("derivative column")[n];
                    let c = PI * (PI * d).cos();
                    (v.re / c, v.im.abs() / c.abs())
                } else {
                    let v = di.next().expect("direct column")[n];
                    let s = (PI * d).sin();
                    (v.re / s, v.im.abs() / s.abs())
                }
            })
            .collect())
    }

    /// Residual of the truncated functional equation at an arbitrary `τ` for the
    /// solved coefficients `f` at argument `x`.
    pub fn residual(&self, f: &[Complex64], x: f64, tau: Complex64) -> f64 {
        let w = 1.0 / sqrt_tau_over_i(tau);
        let lhs: Complex64 = f.iter().enumerate().map(|(n, &c)| c * basis_entry(tau, w, n as f64)).sum();
        let rhs = basis_entry(tau, w, x);
        (lhs - rhs).norm()
    }
}

/// `e^{πisτ} + w e^{−πis/τ}` with `w = (τ/i)^{−1/2}`.
fn basis_entry(tau: Complex64, w: Complex64, s: f64) -> Complex64 {
    (Complex64::i() * PI * s * tau).exp() + w * (-Complex64::i() * PI * s / tau).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_truncation() {
        assert!(CollocationSolver::new(4).is_err());
        assert!(CollocationSolver::with_height(16, -1.0).is_err());
    }

    #[test]
    fn delta_property_small() {
        let s = CollocationSolver::new(96).unwrap();
        for m in 0..20 {
            let r = s.eval_all(m as f64).unwrap();
            for n in 0..20 {
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((r[n].re() - want).abs() < 1e-8, "f_{n}({m}) = {}", r[n].re());
            }
        }
        assert!(s.cond_estimate() < 1e4);
    }

    #[test]
    fn residual_off_nodes() {
        let s = CollocationSolver::new(64).unwrap();
        let f = s.solve_many(&[0.5], false).unwrap().pop().unwrap();
        // midpoints between consecutive nodes
        for k in 0..20 {
            let tau = Complex64::new(-1.0 + (6 * k + 1) as f64 / 64.0, 10.0 / 64.0);
            assert!(s.residual(&f, 0.5, tau) < 1e-8);
        }
    }

    #[test]
    fn meta_json_uses_capital_n() {
        let s = CollocationSolver::new(16).unwrap();
        let j = serde_json::to_value(s.meta()).unwrap();
        assert_eq!(j["N"], 16);
    }
}
