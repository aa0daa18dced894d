//! Zero localization on the real line and zero counting by the argument principle.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::quotient::QuotientEvaluator;
use crate::basis::{ApproxParams, ContourConfig, ContourEvaluator};
use crate::error::{Error, Result};
use crate::special::default_phi;

/// Bisection stops at this interval width.
const BISECT_TOL: f64 = 1e-10;
/// Grid points closer than this to an integer are moved away.
const INTEGER_OFFSET: f64 = 1e-3;
/// A segment this short that still turns by π/2 signals a zero on the contour.
const NEAR_ZERO: f64 = 1e-6;
const NUDGE: f64 = 1e-3;
const MAX_NUDGES: usize = 5;
/// Target argument change per sample where a phase-rate bound is known.
const TURN_PER_SAMPLE: f64 = 0.5;
/// Samples per uniformly spaced chunk of an edge.
const CHUNK_SAMPLES: f64 = 32.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window {
    DeltaWindow { t1: f64, t2: f64 },
    Rectangle { x0: f64, x1: f64, y0: f64, y1: f64 },
    RealInterval { a: f64, b: f64 },
}

impl Window {
    pub fn kind(&self) -> &'static str {
        match self {
            Window::DeltaWindow { .. } => "delta_window",
            Window::Rectangle { .. } => "rectangle",
            Window::RealInterval { .. } => "real_interval",
        }
    }

    /// The two numbers written to the `a,b` columns of the zeros CSV.
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Window::DeltaWindow { t1, t2 } => (t1, t2),
            Window::Rectangle { x1, y1, .. } => (x1, y1),
            Window::RealInterval { a, b } => (a, b),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroReport {
    pub n: usize,
    pub window: Window,
    pub count: usize,
    pub real_zeros: Vec<f64>,
    pub winding_samples: usize,
    /// Accumulated argument change divided by 2π (winding counts only).
    pub raw_winding: f64,
    pub warnings: Vec<String>,
}

fn nudge_off_integer(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < INTEGER_OFFSET {
        if x >= r { r + INTEGER_OFFSET } else { r - INTEGER_OFFSET }
    } else {
        x
    }
}

/// Real zeros of `h_n` in `[a, b]` by a sign-change scan and bisection.
pub fn real_zeros(n: usize, a: f64, b: f64, grid_step: f64) -> Result<ZeroReport> {
    if !(a > 0.0 && b > a && grid_step > 0.0) {
        return Err(Error::invalid(format!("need 0 < a < b and step > 0, got a = {a}, b = {b}, step = {grid_step}")));
    }
    let steps = ((b - a) / grid_step).ceil() as usize;
    let mut xs: Vec<f64> = (0..=steps).map(|k| nudge_off_integer((a + k as f64 * grid_step).min(b))).collect();
    xs.dedup();
    let ev = QuotientEvaluator::new(n, b + 1.0);
    let vals = ev.eval_many(&xs);
    let mut warnings = Vec::new();
    let mut zeros: Vec<f64> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (x, v) in xs.iter().zip(vals) {
        match v {
            Err(e) => {
                if warnings.len() < 10 {
                    warnings.push(format!("coverage gap at x = {x}: {e}"));
                }
                prev = None;
            }
            Ok(h) => {
                if let Some((x0, h0)) = prev {
                    if h0.signum() != h.value.signum() {
                        match bisect(&ev, x0, h0, *x) {
                            Ok(Some(z)) => zeros.push(z),
                            Ok(None) => {}
                            Err(e) => warnings.push(format!("bisection in [{x0}, {x}] failed: {e}")),
                        }
                    }
                }
                prev = Some((*x, h.value));
            }
        }
    }
    zeros.dedup_by(|a, b| (*a - *b).abs() <= NEAR_ZERO);
    Ok(ZeroReport {
        n,
        window: Window::RealInterval { a, b },
        count: zeros.len(),
        real_zeros: zeros,
        winding_samples: 0,
        raw_winding: 0.0,
        warnings,
    })
}

/// Bisection on a bracketing interval. Sign changes across a pole (at `x = n`)
/// are rejected by the final `|h| < 1e−8` check.
fn bisect(ev: &QuotientEvaluator, mut lo: f64, mut hlo: f64, mut hi: f64) -> Result<Option<f64>> {
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let hm = ev.eval(mid)?.value;
        if hm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if hm.signum() == hlo.signum() {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    let hz = ev.eval(z)?.value;
    Ok((hz.abs() < 1e-8).then_some(z))
}

enum Tracking {
    Done { turns: f64, samples: usize },
    NearZero(Complex64),
}

/// Values of the function whose zeros are counted.
trait Sampler {
    fn at(&self, z: Complex64) -> Result<Complex64>;

    /// Bound on `|d arg/dz|` near `z`; zero when unknown.
    fn phase_rate(&self, _z: Complex64) -> f64 {
        0.0
    }

    /// Values at `z₀ + j·dz` for `j = 0..count`.
    fn line(&self, z0: Complex64, dz: Complex64, count: usize) -> Result<Vec<Complex64>> {
        (0..count).map(|j| self.at(z0 + dz * j as f64)).collect()
    }
}

struct FnSampler<F: Fn(Complex64) -> Result<Complex64>>(F);

impl<F: Fn(Complex64) -> Result<Complex64>> Sampler for FnSampler<F> {
    fn at(&self, z: Complex64) -> Result<Complex64> {
        (self.0)(z)
    }
}

struct ContourSampler {
    ev: ContourEvaluator,
    cfg: ContourConfig,
}

impl Sampler for ContourSampler {
    /// From `f_n(z) ≪ e^{π|y|} e^{2π√n Re √(−z)}`: the exponent's derivative is
    /// `π√(n/|z|)` plus `π`.
    fn phase_rate(&self, z: Complex64) -> f64 {
        PI * (self.ev.n() as f64 / z.norm().max(1e-6)).sqrt() + PI
    }

    fn at(&self, z: Complex64) -> Result<Complex64> {
        self.ev.eval_fixed(z, self.cfg, false)
    }

    fn line(&self, z0: Complex64, dz: Complex64, count: usize) -> Result<Vec<Complex64>> {
        self.ev.eval_line(z0, dz, count, self.cfg)
    }
}

fn usable(v: Complex64) -> bool {
    v.norm() > 0.0 && v.is_finite()
}

/// Sample spacing on the segment `[z, z + len·u]`: `step`, reduced so that the
/// phase-rate bound gives at most `TURN_PER_SAMPLE` per sample.
fn spacing(f: &dyn Sampler, z: Complex64, u: Complex64, len: f64, step: f64) -> f64 {
    // the rate bound grows toward the origin, so use the segment's closest point
    let t = (-(z.conj() * u).re).clamp(0.0, len);
    let rate = f.phase_rate(z + u * t).max(f.phase_rate(z)).max(f.phase_rate(z + u * len));
    if rate > 0.0 {
        step.min(TURN_PER_SAMPLE / rate)
    } else {
        step
    }
}

/// Winding number of the sampled function around the polygon `corners`
/// (counter-clockwise). Edges are sampled in uniform chunks whose spacing comes
/// from [`spacing`], bisecting wherever the argument moves by π/2 or more.
fn track(f: &dyn Sampler, corners: &[Complex64], step: f64) -> Result<Tracking> {
    let mut total = 0.0;
    let mut samples = 0;
    for k in 0..corners.len() {
        let (a, b) = (corners[k], corners[(k + 1) % corners.len()]);
        let edge = (b - a).norm();
        let u = (b - a) / edge;
        let mut z0 = a;
        let mut f0 = f.at(a)?;
        samples += 1;
        if !usable(f0) {
            return Ok(Tracking::NearZero(z0));
        }
        let mut pos = 0.0;
        while pos < edge {
            let start = a + u * pos;
            let h0 = spacing(f, start, u, 0.0, step);
            let len = (h0 * CHUNK_SAMPLES).min(edge - pos);
            let h = spacing(f, start, u, len, step);
            let m = ((len / h).ceil() as usize).max(1);
            let dz = u * (len / m as f64);
            let base = f.line(start, dz, m + 1)?;
            samples += m;
            for (j, &fj) in base.iter().enumerate().skip(1) {
                let mut stack = vec![(start + dz * j as f64, fj)];
                while let Some(&(zt, ft)) = stack.last() {
                    if !usable(ft) {
                        return Ok(Tracking::NearZero(zt));
                    }
                    let d = (ft / f0).arg();
                    if d.abs() < PI / 2.0 {
                        total += d;
                        z0 = zt;
                        f0 = ft;
                        stack.pop();
                    } else {
                        if (zt - z0).norm() < NEAR_ZERO {
                            return Ok(Tracking::NearZero(0.5 * (z0 + zt)));
                        }
                        let zm = 0.5 * (z0 + zt);
                        stack.push((zm, f.at(zm)?));
                        samples += 1;
                    }
                }
            }
            pos += len;
        }
    }
    Ok(Tracking::Done { turns: total / (2.0 * PI), samples })
}

struct Counted {
    count: usize,
    raw: f64,
    samples: usize,
    warnings: Vec<String>,
}

/// Argument-principle count over a rectangle `[x0, x1] × [y0, y1]`, nudging the
/// boundary outward when a zero sits on it.
fn count_rectangle(f: &dyn Sampler, (x0, x1, y0, y1): (f64, f64, f64, f64), step: f64) -> Result<Counted> {
    let mut warnings = Vec::new();
    for attempt in 0..=MAX_NUDGES {
        let d = NUDGE * attempt as f64;
        let corners = [
            Complex64::new(x0 - d, y0 - d),
            Complex64::new(x1 + d, y0 - d),
            Complex64::new(x1 + d, y1 + d),
            Complex64::new(x0 - d, y1 + d),
        ];
        let mut s = step;
        for _ in 0..4 {
            match track(f, &corners, s)? {
                Tracking::NearZero(z) => {
                    warnings.push(format!("zero near the contour at {z}; nudging by {NUDGE}"));
                    break;
                }
                Tracking::Done { turns, samples } => {
                    let k = turns.round();
                    if (turns - k).abs() < 1e-3 && k >= 0.0 {
                        return Ok(Counted { count: k as usize, raw: turns, samples, warnings });
                    }
                    s *= 0.5;
                }
            }
        }
    }
    Err(Error::Tolerance {
        msg: format!("winding count did not settle after {MAX_NUDGES} nudges"),
        best_re: f64::NAN,
        best_im: 0.0,
        err: f64::NAN,
    })
}

/// Zeros of `h_n` in the window `Δ(t₁, t₂, n)`, counted in the coordinate
/// `w = (√z − √n)²` over `t₁ < Re w < t₂`, `|Im w| < log n`.
pub fn count_zeros_delta(n: usize, t1: f64, t2: f64) -> Result<ZeroReport> {
    if !(3.0 <= t1 && t1 < t2 && t2 <= n as f64 / 2.0) {
        return Err(Error::invalid(format!("need 3 ≤ t1 < t2 ≤ n/2, got t1 = {t1}, t2 = {t2}, n = {n}")));
    }
    let rn = (n as f64).sqrt();
    let params = ApproxParams::default();
    let contour = ContourEvaluator::new(n).with_tolerance(1e-8);
    let f = |w: Complex64| -> Result<Complex64> {
        let sw = w.sqrt();
        let sz = rn - sw;
        let approx_ok = sz.re > (1.0 / 3.0 + params.eps) * rn;
        if approx_ok {
            let err = params.c * (PI * 3f64.sqrt() * (rn / 3.0 - sz.re)).exp();
            let v = default_phi().phi(-sw)? / rn;
            if err <= 1e-6 * v.norm() {
                return Ok(v);
            }
        }
        let z = sz * sz;
        let v = contour.eval(z, 64)?.value;
        Ok(v / (PI * (z - n as f64)).sin())
    };
    let l = (n as f64).ln();
    let c = count_rectangle(&FnSampler(f), (t1, t2, -l, l), 0.1)?;
    Ok(ZeroReport {
        n,
        window: Window::DeltaWindow { t1, t2 },
        count: c.count,
        real_zeros: Vec::new(),
        winding_samples: c.samples,
        raw_winding: c.raw,
        warnings: c.warnings,
    })
}

/// Zeros of `f_n` (including the integer ones) in `0 ≤ Re z ≤ r`, `|Im z| ≤ r`.
pub fn count_zeros_rectangle(n: usize, r: f64) -> Result<ZeroReport> {
    if !(10.0 <= r && r <= n as f64 / 8.0) {
        return Err(Error::invalid(format!("need 10 ≤ r ≤ n/8, got r = {r}, n = {n}")));
    }
    let contour = ContourEvaluator::new(n).with_tolerance(1e-8);
    let m = NUDGE * MAX_NUDGES as f64;
    let probes: Vec<Complex64> = [(-m, -r - m), (r + m, -r - m), (r + m, r + m), (-m, r + m), (r / 2.0, r + m)]
        .iter()
        .map(|&(a, b)| Complex64::new(a, b))
        .collect();
    let cfg = contour.calibrate(&probes)?;
    let c = count_rectangle(&ContourSampler { ev: contour, cfg }, (0.0, r, -r, r), 0.25)?;
    Ok(ZeroReport {
        n,
        window: Window::Rectangle { x0: 0.0, x1: r, y0: -r, y1: r },
        count: c.count,
        real_zeros: Vec::new(),
        winding_samples: c.samples,
        raw_winding: c.raw,
        warnings: c.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn winding_of_polynomial() {
        // z² − 1 has both roots inside the square, one on the boundary of the right half
        let f = FnSampler(|z: Complex64| Ok(z * z - 1.0));
        let c = count_rectangle(&f, (-2.0, 2.0, -2.0, 2.0), 0.5).unwrap();
        assert_eq!(c.count, 2);
        let g = count_rectangle(&f, (1.0, 3.0, -1.0, 1.0), 0.5).unwrap();
        // the root at 1 lies on the edge; the nudged contour includes it
        assert_eq!(g.count, 1);
        assert!(!g.warnings.is_empty());
    }

    #[test]
    fn degenerate_windows_rejected() {
        assert!(count_zeros_delta(500, 20.0, 20.0).is_err());
        assert!(count_zeros_delta(500, 2.0, 20.0).is_err());
        assert!(count_zeros_rectangle(40, 10.0).is_err());
        assert!(real_zeros(3, 2.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn integer_offset() {
        assert_eq!(nudge_off_integer(3.0), 3.001);
        assert_eq!(nudge_off_integer(2.9995), 2.999);
        assert_eq!(nudge_off_integer(2.5), 2.5);
    }
}
