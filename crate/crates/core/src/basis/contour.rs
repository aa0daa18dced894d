//! `f_n(z) = ½∫ g_n(w) e^{πiwz} dw` over the upper unit semicircle from −1 to 1,
//! by composite Gauss–Legendre quadrature in the angle, in software floating point.
//!
//! The integrand reaches `e^{πn}` near `w = i` while the result is of order one,
//! so the working precision grows with `n`. A rule (nodes `w_k` and weights
//! `A_k` that already include `g_n(w_k)`) depends only on `n`, the precision and
//! the panel count; it is cached and reused for every `z`.

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Complex, Float};
use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use rayon::prelude::*;
use std::sync::{Arc, OnceLock, RwLock};

use super::{EvalMethod, EvalResult};
use crate::error::{Error, Result};
use crate::modular::expansions::q_poly;
use crate::modular::mp::{g_value_mp, q_poly_float};

/// Default Gauss–Legendre points per panel. At the precisions needed here a
/// high order needs far fewer nodes than many low-order panels.
const ORDER: usize = 512;
/// Panel doublings tried at one precision before raising it.
const MAX_DOUBLINGS: u32 = 4;

pub const DEFAULT_PRECISION_CAP: u32 = 4096;

struct Rule {
    nodes: Vec<Complex>,
    weights: Vec<Complex>,
}

type GlTable = Arc<Vec<(Float, Float)>>;

fn gl_cache() -> &'static RwLock<HashMap<(usize, u32), GlTable>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, u32), GlTable>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` at `prec` bits, by Newton
/// refinement of the double-precision rule. Cached per `(order, prec)`.
fn gauss_legendre_mp(order: usize, prec: u32) -> GlTable {
    if let Some(t) = gl_cache().read().expect("GL cache poisoned").get(&(order, prec)) {
        return t.clone();
    }
    let (x64, _) = crate::special::gauss_legendre(order);
    // quadratic convergence from about 45 correct bits
    let iters = 2 + (prec as f64 / 45.0).log2().max(0.0).ceil() as usize;
    let refine = |x0: f64| {
        let mut x = Float::with_val(prec, x0);
        for _ in 0..iters {
            let (p, d) = legendre_mp(order, &x, prec);
            x -= Float::with_val(prec, &p / &d);
        }
        let (_, d) = legendre_mp(order, &x, prec);
        let one_minus = Float::with_val(prec, 1 - Float::with_val(prec, x.square_ref()));
        let w = Float::with_val(prec, 2u32 / (one_minus * Float::with_val(prec, d.square_ref())));
        (x, w)
    };
    // the rule is symmetric: refine the nonnegative half and mirror it
    let half: Vec<(Float, Float)> = x64[..order.div_ceil(2)].par_iter().map(|&x| refine(x)).collect();
    let mut all = half.clone();
    for (x, w) in half[..order / 2].iter().rev() {
        all.push((Float::with_val(prec, -x), w.clone()));
    }
    let table = Arc::new(all);
    gl_cache().write().expect("GL cache poisoned").insert((order, prec), table.clone());
    table
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre_mp(n: usize, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(prec, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(prec, &p0 * (k - 1) as u32);
        let p2 = (a - b) / k as u32;
        p0 = std::mem::replace(&mut p1, p2);
    }
    let num = Float::with_val(prec, x * &p1) - &p0;
    let den = Float::with_val(prec, x.square_ref()) - 1u32;
    let d = num * n as u32 / den;
    (p1, d)
}

/// Working precision and panel count of a quadrature rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContourConfig {
    pub prec: u32,
    pub panels: usize,
}

/// Contour evaluator for one index `n`, with cached quadrature rules.
pub struct ContourEvaluator {
    n: usize,
    tol: f64,
    cap: u32,
    order: usize,
    g_bits: OnceLock<f64>,
    rules: RwLock<HashMap<(u32, usize), Arc<Rule>>>,
}

impl ContourEvaluator {
    pub fn new(n: usize) -> Self {
        ContourEvaluator { n, tol: 1e-12, cap: DEFAULT_PRECISION_CAP, order: ORDER, g_bits: OnceLock::new(), rules: RwLock::new(HashMap::new()) }
    }

    /// Requested accuracy, relative to `max(1, |f_n(z)|)`.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_precision_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    /// Gauss–Legendre points per panel (even).
    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order.max(2) & !1;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Bits of the largest intermediate in `g_n` on the arc. There `J` is real
    /// in `(0, 64]`, so Horner's partial sums stay below `Σ|c_k|·64^k`, which
    /// exceeds `|g_n| ≤ e^{πn}` by a few hundred bits for large `n`.
    fn g_bits(&self) -> f64 {
        *self.g_bits.get_or_init(|| {
            let pole = PI * self.n as f64 / LN_2;
            match q_poly(self.n) {
                Ok(c) => {
                    let top = c
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| **c != 0)
                        .map(|(k, c)| c.significant_bits() as f64 + 6.0 * k as f64)
                        .fold(0.0, f64::max);
                    top.max(pole) + ((c.len() + 1) as f64).log2() + 1.0
                }
                Err(_) => pole,
            }
        })
    }

    /// Bits needed to absorb the cancellation at `z`, plus guard bits.
    pub fn auto_precision(&self, z: Complex64) -> u32 {
        let growth = self.g_bits() + PI * ((-z.re).max(0.0) + z.im.abs()) / LN_2;
        let tol_bits = -self.tol.max(1e-300).log2();
        (64.0 + growth + tol_bits).ceil() as u32
    }

    fn base_panels(&self, z: Complex64) -> usize {
        ((8.0 * (self.n as f64 + z.norm()) / self.order as f64).ceil() as usize).max(1).next_power_of_two()
    }

    fn rule(&self, prec: u32, panels: usize) -> Result<Arc<Rule>> {
        if let Some(r) = self.rules.read().expect("rule cache poisoned").get(&(prec, panels)) {
            return Ok(r.clone());
        }
        let coeffs = q_poly_float(self.n, prec)?;
        let gl = gauss_legendre_mp(self.order, prec);
        let pi = Float::with_val(prec, Constant::Pi);
        let half_width = Float::with_val(prec, &pi / (2 * panels) as u32);
        let mut angles = Vec::with_capacity(panels * self.order);
        for p in 0..panels {
            let mid = Float::with_val(prec, &pi * (2 * p + 1) as u32) / (2 * panels) as u32;
            for (x, w) in gl.iter() {
                let psi = Float::with_val(prec, &mid + Float::with_val(prec, x * &half_width));
                angles.push((psi, Float::with_val(prec, w * &half_width)));
            }
        }
        angles.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));
        let half = angles.len() / 2;
        // g_n has real q-coefficients, so g_n(−w̄) = conj g_n(w): evaluate one half of the arc
        let right: Vec<(Complex, Complex)> = angles[..half]
            .par_iter()
            .map(|(psi, _)| {
                let (s, c) = psi.clone().sin_cos(Float::new(prec));
                let node = Complex::with_val(prec, (c, s));
                let g = g_value_mp(&coeffs, &node, prec);
                (node, g)
            })
            .collect();
        let mut nodes = Vec::with_capacity(angles.len());
        let mut weights = Vec::with_capacity(angles.len());
        for (k, (_, dpsi)) in angles.iter().enumerate() {
            let (node, g) = if k < half {
                right[k].clone()
            } else {
                let (w, g) = &right[angles.len() - 1 - k];
                let mut w = Complex::with_val(prec, w.conj_ref());
                w = -w;
                (w, Complex::with_val(prec, g.conj_ref()))
            };
            // dw = i w dψ; the path runs from ψ = π down to 0, and the prefactor is ½
            let mut a = Complex::with_val(prec, &g * &node);
            a.mul_i_mut(false);
            a *= dpsi;
            a /= -2i32;
            nodes.push(node);
            weights.push(a);
        }
        let rule = Arc::new(Rule { nodes, weights });
        self.rules.write().expect("rule cache poisoned").insert((prec, panels), rule.clone());
        Ok(rule)
    }

    fn apply(rule: &Rule, z: Complex64, prec: u32, derivative: bool) -> Complex {
        let zc = Complex::with_val(prec, (z.re, z.im));
        let pi = Float::with_val(prec, Constant::Pi);
        let mut sum = Complex::new(prec);
        for (w, a) in rule.nodes.iter().zip(&rule.weights) {
            let mut arg = Complex::with_val(prec, w * &zc);
            arg *= &pi;
            arg.mul_i_mut(false);
            let mut t = Complex::with_val(prec, arg.exp_ref());
            t *= a;
            if derivative {
                t *= w;
                t *= &pi;
                t.mul_i_mut(false);
            }
            sum += &t;
        }
        sum
    }

    /// `Σ A_k e^{πiw_k(z₀ + j·dz)}` for `j = 0..count`, stepping each exponential
    /// by multiplication instead of recomputing it.
    fn apply_line(rule: &Rule, z0: Complex64, dz: Complex64, count: usize, prec: u32) -> Vec<Complex> {
        let pi = Float::with_val(prec, Constant::Pi);
        let exp_of = |w: &Complex, z: Complex64| {
            let mut arg = Complex::with_val(prec, w * &Complex::with_val(prec, (z.re, z.im)));
            arg *= &pi;
            arg.mul_i_mut(false);
            arg.exp()
        };
        let mut sums: Vec<Complex> = (0..count).map(|_| Complex::new(prec)).collect();
        for (w, a) in rule.nodes.iter().zip(&rule.weights) {
            let step = exp_of(w, dz);
            let mut t = exp_of(w, z0);
            t *= a;
            for s in sums.iter_mut() {
                *s += &t;
                t *= &step;
            }
        }
        sums
    }

    fn run(&self, z: Complex64, start_prec: u32, derivative: bool) -> Result<(Complex64, f64)> {
        self.run_config(z, start_prec, derivative).map(|(v, e, _)| (v, e))
    }

    fn run_config(&self, z: Complex64, start_prec: u32, derivative: bool) -> Result<(Complex64, f64, ContourConfig)> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("non-finite argument"));
        }
        let mut prec = start_prec.max(self.auto_precision(z)).max(64);
        let base = self.base_panels(z);
        let mut best = (Complex64::new(f64::NAN, f64::NAN), f64::INFINITY);
        loop {
            let mut panels = base;
            let mut prev = Self::apply(&*self.rule(prec, panels)?, z, prec, derivative);
            for _ in 0..MAX_DOUBLINGS {
                panels *= 2;
                let cur = Self::apply(&*self.rule(prec, panels)?, z, prec, derivative);
                let diff = Complex::with_val(prec, &cur - &prev);
                let diff = Float::with_val(prec, diff.abs_ref()).to_f64();
                let value = Complex64::new(cur.real().to_f64(), cur.imag().to_f64());
                if diff < best.1 {
                    best = (value, diff);
                }
                if diff <= self.tol * value.norm().max(1.0) {
                    // the difference bounds the error of the coarser rule
                    return Ok((value, diff, ContourConfig { prec, panels: panels / 2 }));
                }
                prev = cur;
            }
            if prec >= self.cap {
                return Err(Error::Tolerance {
                    msg: format!("contour quadrature for f_{} at z = {z} did not reach {}", self.n, self.tol),
                    best_re: best.0.re,
                    best_im: best.0.im,
                    err: best.1,
                });
            }
            prec = (prec * 2).min(self.cap);
        }
    }

    /// Precision and panel count sufficient at every point of `zs`; reused by
    /// [`eval_fixed`](Self::eval_fixed) for many nearby points.
    pub fn calibrate(&self, zs: &[Complex64]) -> Result<ContourConfig> {
        // one shared starting precision, so every probe reuses the same rules
        let start = zs.iter().map(|&z| self.auto_precision(z)).max().unwrap_or(64);
        let mut cfg = ContourConfig { prec: 64, panels: 1 };
        for &z in zs {
            let (_, _, c) = self.run_config(z, start, false)?;
            cfg.prec = cfg.prec.max(c.prec);
            cfg.panels = cfg.panels.max(c.panels);
        }
        Ok(cfg)
    }

    /// `f_n(z)` (or `f_n'(z)`) with a fixed rule, no convergence check.
    pub fn eval_fixed(&self, z: Complex64, cfg: ContourConfig, derivative: bool) -> Result<Complex64> {
        let v = Self::apply(&*self.rule(cfg.prec, cfg.panels)?, z, cfg.prec, derivative);
        Ok(Complex64::new(v.real().to_f64(), v.imag().to_f64()))
    }

    /// `f_n(z₀ + j·dz)` for `j = 0..count` with a fixed rule.
    pub fn eval_line(&self, z0: Complex64, dz: Complex64, count: usize, cfg: ContourConfig) -> Result<Vec<Complex64>> {
        let rule = self.rule(cfg.prec, cfg.panels)?;
        Ok(Self::apply_line(&rule, z0, dz, count, cfg.prec)
            .into_iter()
            .map(|v| Complex64::new(v.real().to_f64(), v.imag().to_f64()))
            .collect())
    }

    /// `f_n(z)`, starting at `start_prec` bits (raised automatically when needed).
    pub fn eval(&self, z: Complex64, start_prec: u32) -> Result<EvalResult> {
        let (value, err) = self.run(z, start_prec, false)?;
        Ok(EvalResult { n: self.n, x: z, value, method: EvalMethod::Contour, err })
    }

    /// `f_n'(z)`.
    pub fn eval_derivative(&self, z: Complex64, start_prec: u32) -> Result<EvalResult> {
        let (value, err) = self.run(z, start_prec, true)?;
        Ok(EvalResult { n: self.n, x: z, value, method: EvalMethod::Contour, err })
    }
}

/// One-shot contour evaluation of `f_n(z)`.
pub fn eval_contour(n: usize, z: Complex64, precision_bits: u32) -> Result<EvalResult> {
    ContourEvaluator::new(n).eval(z, precision_bits)
}
