//! Second moments `∫ f_n²` by composite Gauss–Legendre quadrature, graded in `√x` near 0 and unit panels beyond.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::basis::CollocationSolver;
use crate::error::{Error, Result};
use crate::special::gauss_legendre;

const ORDER: usize = 8;
/// Every `SAMPLE_EVERY`-th panel is also integrated on two half panels.
const SAMPLE_EVERY: usize = 8;
/// Panels per batched solve.
const CHUNK: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct MomentResult {
    /// `n` for a single moment, `ξ` for a sum over `n ≤ ξ`.
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub panels: usize,
    pub err: f64,
    /// Analytic estimate of `∫_b^∞ f_n²`, included in `err` but not in `value`.
    pub tail: f64,
}

/// `∫_a^b` of `f_n²` for one target inside a shared integration.
#[derive(Clone, Copy, Debug)]
pub struct Target {
    pub n: usize,
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PanelKey(u64, u64);

impl PanelKey {
    fn new(lo: f64, hi: f64) -> Self {
        PanelKey(lo.to_bits(), hi.to_bits())
    }
    fn bounds(self) -> (f64, f64) {
        (f64::from_bits(self.0), f64::from_bits(self.1))
    }
}

/// Panels of `[a, b]`: uniform in `√x` with step `du` while that is finer than
/// `width`, then uniform in `x`. Below `x ≈ n` the functions oscillate like
/// `e^{iπc√(nx)}`, so the `√x` grid resolves them near 0.
fn panel_edges(a: f64, b: f64, width: f64, du: f64) -> Vec<(f64, f64)> {
    let mut edges = vec![a];
    let mut x = a;
    let mut k = 0usize;
    let u0 = a.sqrt();
    // u-grid while the induced x-step 2u·du is below `width`
    loop {
        k += 1;
        let u = u0 + k as f64 * du;
        let next = u * u;
        if next - x >= width || next >= b {
            break;
        }
        edges.push(next);
        x = next;
    }
    let full = ((b - x) / width).floor() as usize;
    edges.extend((1..=full).map(|j| x + j as f64 * width));
    let last = *edges.last().expect("nonempty");
    if b - last > 1e-12 * width.max(b.abs()) {
        edges.push(b);
    }
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

#[derive(Default, Clone, Copy)]
struct Acc {
    value: f64,
    halving_diff: f64,
    imag: f64,
    panels: usize,
    sampled: usize,
}

/// Integrates `f_n²` for every target using one solver, sharing the panel
/// nodes between targets whose panels coincide. `width` is the panel width in
/// `x`; the `√x`-graded panels near 0 scale with it.
pub fn integrate_squares(solver: &CollocationSolver, targets: &[Target], width: f64) -> Result<Vec<MomentResult>> {
    if !(width > 0.0) {
        return Err(Error::invalid(format!("panel width {width} must be positive")));
    }
    for t in targets {
        if !(t.a >= 0.0 && t.b >= t.a) {
            return Err(Error::invalid(format!("need 0 ≤ a ≤ b, got [{}, {}]", t.a, t.b)));
        }
        if t.n > solver.trusted_max() || t.b > solver.trusted_x() {
            return Err(Error::invalid(format!(
                "n = {} on [{}, {}] exceeds the trusted range of N = {}",
                t.n,
                t.a,
                t.b,
                solver.size()
            )));
        }
    }
    let n_max = targets.iter().map(|t| t.n).max().unwrap_or(0).max(1);
    let du = width / (4.0 * (n_max as f64).sqrt());
    // panel -> (targets using it, sampled for halving)
    let mut panels: BTreeMap<PanelKey, (Vec<usize>, bool)> = BTreeMap::new();
    for (ti, t) in targets.iter().enumerate() {
        for (k, (lo, hi)) in panel_edges(t.a, t.b, width, du).into_iter().enumerate() {
            let e = panels.entry(PanelKey::new(lo, hi)).or_insert_with(|| (Vec::new(), false));
            e.0.push(ti);
            e.1 |= k % SAMPLE_EVERY == 0;
        }
    }
    let (gx, gw) = gauss_legendre(ORDER);
    let list: Vec<(PanelKey, (Vec<usize>, bool))> = panels.into_iter().collect();

    let partials: Vec<Result<Vec<Acc>>> = list
        .par_chunks(CHUNK)
        .map(|chunk| {
            // node layout per panel: 8 full nodes, then 16 half-panel nodes when sampled
            let mut xs = Vec::new();
            let mut ws = Vec::new();
            for (key, (_, sampled)) in chunk {
                let (lo, hi) = key.bounds();
                let mut push = |lo: f64, hi: f64| {
                    let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                    for (x, w) in gx.iter().zip(&gw) {
                        xs.push(c + r * x);
                        ws.push(r * w);
                    }
                };
                push(lo, hi);
                if *sampled {
                    let mid = 0.5 * (lo + hi);
                    push(lo, mid);
                    push(mid, hi);
                }
            }
            let sols = solver.solve_many(&xs, false)?;
            let mut acc = vec![Acc::default(); targets.len()];
            let mut at = 0;
            for (_, (users, sampled)) in chunk {
                let span = if *sampled { 3 * ORDER } else { ORDER };
                for &ti in users {
                    let n = targets[ti].n;
                    let mut full = 0.0;
                    let mut imag = 0.0;
                    for j in at..at + ORDER {
                        let v = sols[j][n];
                        full += ws[j] * v.re * v.re;
                        imag += ws[j] * 2.0 * v.re.abs() * v.im.abs();
                    }
                    let a = &mut acc[ti];
                    a.value += full;
                    a.imag += imag;
                    a.panels += 1;
                    if *sampled {
                        let halves: f64 = (at + ORDER..at + span).map(|j| ws[j] * sols[j][n].re.powi(2)).sum();
                        a.halving_diff += (halves - full).abs();
                        a.sampled += 1;
                    }
                }
                at += span;
            }
            Ok(acc)
        })
        .collect();

    let mut total = vec![Acc::default(); targets.len()];
    for p in partials {
        for (t, a) in total.iter_mut().zip(p?) {
            t.value += a.value;
            t.imag += a.imag;
            t.halving_diff += a.halving_diff;
            t.panels += a.panels;
            t.sampled += a.sampled;
        }
    }
    Ok(targets
        .iter()
        .zip(total)
        .map(|(t, a)| {
            let scaled = if a.sampled > 0 { a.halving_diff * a.panels as f64 / a.sampled as f64 } else { 0.0 };
            let tail = tail_estimate(t.n, t.b);
            MomentResult {
                n: t.n,
                a: t.a,
                b: t.b,
                value: a.value,
                panels: a.panels,
                err: scaled + a.imag + tail,
                tail,
            }
        })
        .collect())
}

/// `∫_b^∞ f_n²` from the decay `f_n/sin π(x − n) ≈ (2/√3) e^{−π√3(√x − √n)}/√n`,
/// averaging `sin² = 1/2`. Zero when `b` lies below `n + √n`, where the decay
/// has not set in and no tail is claimed.
pub fn tail_estimate(n: usize, b: f64) -> f64 {
    let rn = (n as f64).sqrt();
    if n == 0 || b < n as f64 + rn {
        return 0.0;
    }
    let a = 2.0 * PI * 3f64.sqrt();
    let u0 = b.sqrt();
    // ∫_{u0}^∞ 2u e^{−a(u − √n)} du
    let integral = (-a * (u0 - rn)).exp() * (2.0 * u0 / a + 2.0 / (a * a));
    2.0 / (3.0 * n as f64) * integral
}

fn solver_for(n_max: usize, x_max: f64) -> Result<CollocationSolver> {
    CollocationSolver::new(CollocationSolver::recommended_size(n_max, x_max))
}

/// `∫_a^b f_n(x)² dx`.
pub fn moment_fn(n: usize, a: f64, b: f64) -> Result<MomentResult> {
    moment_fn_with_width(n, a, b, 1.0)
}

/// [`moment_fn`] with a chosen panel width (unit width is the default).
pub fn moment_fn_with_width(n: usize, a: f64, b: f64, width: f64) -> Result<MomentResult> {
    if !(a >= 0.0 && b >= a) {
        return Err(Error::invalid(format!("need 0 ≤ a ≤ b, got [{a}, {b}]")));
    }
    let solver = solver_for(n, b)?;
    Ok(integrate_squares(&solver, &[Target { n, a, b }], width)?.remove(0))
}

/// `∫_0^{x_cut} f_n²` for several `n`, each with its own cut, from one solver.
pub fn moments_to_cut(ns: &[usize], cut: impl Fn(usize) -> f64) -> Result<(Vec<MomentResult>, Arc<CollocationSolver>)> {
    let targets: Vec<Target> = ns.iter().map(|&n| Target { n, a: 0.0, b: cut(n) }).collect();
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let x_max = targets.iter().map(|t| t.b).fold(0.0, f64::max);
    let solver = Arc::new(solver_for(n_max, x_max)?);
    Ok((integrate_squares(&solver, &targets, 1.0)?, solver))
}

/// Default full-line cut `n + 40√n`.
pub fn default_cut(n: usize) -> f64 {
    n as f64 + 40.0 * (n as f64).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct L2Sum {
    pub xi: usize,
    pub x_cut: f64,
    pub value: f64,
    pub err: f64,
    /// `value/(ξ log ξ)`.
    pub per_xi_log: f64,
    /// `value/(ξ log² ξ)`.
    pub per_xi_log2: f64,
    pub terms: Vec<MomentResult>,
}

/// `Σ_{n≤ξ} ∫_0^{x_cut} f_n²`, with `x_cut` defaulting to `ξ + 40√ξ`.
pub fn l2_sum(xi: usize, x_cut: Option<f64>) -> Result<L2Sum> {
    if xi < 2 {
        return Err(Error::invalid(format!("ξ = {xi} must be at least 2")));
    }
    let x_cut = x_cut.unwrap_or_else(|| default_cut(xi));
    if !(x_cut > 0.0) {
        return Err(Error::invalid(format!("x_cut = {x_cut} must be positive")));
    }
    let ns: Vec<usize> = (0..=xi).collect();
    let (terms, _) = moments_to_cut(&ns, |_| x_cut)?;
    let value: f64 = terms.iter().map(|t| t.value).sum();
    let err: f64 = terms.iter().map(|t| t.err).sum();
    let l = (xi as f64).ln();
    Ok(L2Sum {
        xi,
        x_cut,
        value,
        err,
        per_xi_log: value / (xi as f64 * l),
        per_xi_log2: value / (xi as f64 * l * l),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panels_cover_interval() {
        let p = panel_edges(0.5, 3.25, 1.0, 1.0);
        assert_eq!(p, vec![(0.5, 1.5), (1.5, 2.5), (2.5, 3.25)]);
        assert!(panel_edges(2.0, 2.0, 1.0, 0.1).is_empty());
        let g = panel_edges(0.0, 30.0, 1.0, 0.1);
        assert_eq!(g[0], (0.0, 0.1f64.powi(2)));
        assert!(g.windows(2).all(|w| w[0].1 == w[1].0));
        assert!(g.iter().all(|p| p.1 - p.0 <= 1.0 + 1e-12));
        assert_eq!(g.last().unwrap().1, 30.0);
    }

    #[test]
    fn empty_interval_is_zero() {
        let m = moment_fn(5, 3.0, 3.0).unwrap();
        assert_eq!(m.value, 0.0);
        assert_eq!(m.panels, 0);
    }

    #[test]
    fn tail_vanishes_below_threshold() {
        assert_eq!(tail_estimate(100, 105.0), 0.0);
        let t = tail_estimate(100, 150.0);
        assert!(t > 0.0 && t < 1e-10);
    }

    #[test]
    fn shared_panels_match_single_runs() {
        let solver = CollocationSolver::new(120).unwrap();
        let both = integrate_squares(
            &solver,
            &[Target { n: 3, a: 0.0, b: 10.5 }, Target { n: 7, a: 0.0, b: 12.0 }],
            1.0,
        )
        .unwrap();
        let single = integrate_squares(&solver, &[Target { n: 7, a: 0.0, b: 12.0 }], 1.0).unwrap();
        assert!((both[1].value - single[0].value).abs() < 1e-14);
        assert!(both[0].value > 0.0);
    }
}
