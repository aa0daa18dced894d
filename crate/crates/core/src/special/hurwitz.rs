//! Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (n + a)^{−s}` by Euler–Maclaurin, in double
//! and in multiple precision.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

/// Euler–Maclaurin parameters for the double-precision path.
pub const EM_OFFSET: usize = 50;
pub const EM_TERMS: usize = 12;

/// Bernoulli numbers `B_0, B_1 = −1/2, B_2, …` up to index `n`, memoized.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    let lock = TABLE.get_or_init(|| RwLock::new(vec![Rational::from(1)]));
    {
        let t = lock.read().expect("bernoulli table poisoned");
        if t.len() > n {
            return t[..=n].to_vec();
        }
    }
    let mut t = lock.write().expect("bernoulli table poisoned");
    // Σ_{k=0}^{m} C(m+1, k) B_k = 0
    while t.len() <= n {
        let m = t.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in t.iter().enumerate() {
            acc += Rational::from(bk * &binom);
            binom *= (m + 1 - k) as u32;
            binom /= (k + 1) as u32;
        }
        t.push(Rational::from(-acc / (m as u32 + 1)));
    }
    t[..=n].to_vec()
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::invalid(format!("Hurwitz parameter a = {a} must lie in (0, 1)")));
    }
    Ok(())
}

/// `ζ(s, a)` for real `s ≠ 1` and `a ∈ (0, 1)` in double precision.
///
/// Uses Euler–Maclaurin with offset [`EM_OFFSET`] and [`EM_TERMS`] correction
/// terms; for `s < −10` it switches to Hurwitz's formula, which converges
/// absolutely there.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    check_a(a)?;
    if s == 1.0 {
        return Err(Error::Pole("ζ(s, a) has a pole at s = 1".into()));
    }
    if s < -10.0 {
        return Ok(hurwitz_formula_f64(1.0 - s, a));
    }
    Ok(euler_maclaurin_f64(s, a, EM_OFFSET, EM_TERMS))
}

fn euler_maclaurin_f64(s: f64, a: f64, n: usize, p: usize) -> f64 {
    let mut sum = 0.0;
    for k in 0..n {
        sum += (k as f64 + a).powf(-s);
    }
    let x = n as f64 + a;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    let b = bernoulli(2 * p);
    // poch = s(s+1)…(s+2j−2), fact = (2j)!
    let mut poch = s;
    let mut fact = 2.0;
    let mut xp = x.powf(-s - 1.0);
    for j in 1..=p {
        sum += b[2 * j].to_f64() / fact * poch * xp;
        poch *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
        xp /= x * x;
    }
    sum
}

/// `ζ(1 − s, a) = 2Γ(s)(2π)^{−s} Σ_{n≥1} cos(πs/2 − 2πna) n^{−s}`, for `s > 11`.
fn hurwitz_formula_f64(s: f64, a: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 1.0f64;
    loop {
        let t = (PI * s / 2.0 - 2.0 * PI * n * a).cos() * n.powf(-s);
        sum += t;
        if n.powf(-s) < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        n += 1.0;
    }
    let lg = ln_gamma(s);
    2.0 * sum * (lg - s * (2.0 * PI).ln()).exp()
}

fn ln_gamma(x: f64) -> f64 {
    Float::with_val(64, x).ln_gamma().to_f64()
}

/// Multiprecision `ζ(s, a)` for real `s ≠ 1`, `a ∈ (0, 1]`.
pub fn hurwitz_zeta_mp(s: &Float, a: &Float, prec: u32) -> Float {
    let wp = prec + 32;
    let one = Float::with_val(wp, 1);
    // tail below 2^{-wp} relative to the first term once (a/(N+a))^s is tiny
    let sf = s.to_f64();
    let af = a.to_f64();
    let direct_n = {
        let ratio_bits = |n: f64| sf * ((n + af) / af).log2();
        let mut n = 8.0;
        while ratio_bits(n) < wp as f64 + 8.0 && n < 4096.0 {
            n *= 2.0;
        }
        if ratio_bits(n) >= wp as f64 + 8.0 {
            Some(n as usize)
        } else {
            None
        }
    };
    if let Some(n) = direct_n {
        let mut sum = Float::new(wp);
        for k in 0..n {
            let base = Float::with_val(wp, a + k as u32);
            sum += base.pow(&Float::with_val(wp, -s));
        }
        return Float::with_val(prec, sum);
    }
    let p = (wp as usize / 6).max(8);
    let n = (sf + 2.0 * p as f64).ceil() as usize + 16;
    let mut sum = Float::new(wp);
    let neg_s = Float::with_val(wp, -s);
    for k in 0..n {
        let base = Float::with_val(wp, a + k as u32);
        sum += base.pow(&neg_s);
    }
    let x = Float::with_val(wp, a + n as u32);
    let s_minus_1 = Float::with_val(wp, s - &one);
    let x_pow = Float::with_val(wp, (&x).pow(&neg_s));
    sum += Float::with_val(wp, &x_pow * &x) / &s_minus_1;
    sum += Float::with_val(wp, &x_pow / 2u32);
    let b = bernoulli(2 * p);
    let mut poch = Float::with_val(wp, s);
    let mut fact = Float::with_val(wp, 2);
    let x2 = Float::with_val(wp, x.square_ref());
    let mut xp = Float::with_val(wp, &x_pow / &x);
    for j in 1..=p {
        let bj = Float::with_val(wp, &b[2 * j]);
        sum += Float::with_val(wp, &bj * &poch) * &xp / &fact;
        let j2 = 2.0 * j as f64;
        poch *= Float::with_val(wp, s + (j2 - 1.0));
        poch *= Float::with_val(wp, s + j2);
        fact *= ((2 * j + 1) * (2 * j + 2)) as u32;
        xp /= &x2;
    }
    Float::with_val(prec, sum)
}

/// `ζ(m/2, a)` for `m = m0, m0+1, …` (`m0 ≥ 3`), sharing the power tables.
pub fn hurwitz_half_ladder_mp(a: &Float, m0: u32, count: usize, prec: u32) -> Vec<Float> {
    assert!(m0 >= 3, "ladder needs s > 1");
    let wp = prec + 32;
    let n = ((wp / 2) as usize).max(32);
    let half = Float::with_val(wp, 0.5);
    let mut step = Vec::with_capacity(n + 1);
    let mut pw = Vec::with_capacity(n + 1);
    let s0 = Float::with_val(wp, m0) / 2u32;
    let neg_s0 = Float::with_val(wp, -&s0);
    for j in 0..=n {
        let base = Float::with_val(wp, a + j as u32);
        step.push(Float::with_val(wp, (&base).pow(&half)).recip());
        pw.push(base.pow(&neg_s0));
    }
    let x = Float::with_val(wp, a + n as u32);
    let x2 = Float::with_val(wp, x.square_ref());
    let tol = Float::with_val(wp, 1) >> (wp as i32 + 4);
    let pmax = n.min(128);
    let b: Vec<Float> = bernoulli(2 * pmax).iter().map(|q| Float::with_val(wp, q)).collect();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let s = Float::with_val(wp, m0 as usize + i) / 2u32;
        let mut sum = Float::new(wp);
        for p in &pw[..n] {
            sum += p;
        }
        let x_pow = &pw[n];
        let s_minus_1 = Float::with_val(wp, &s - 1u32);
        sum += Float::with_val(wp, x_pow * &x) / &s_minus_1;
        sum += Float::with_val(wp, x_pow / 2u32);
        let mut poch = s.clone();
        let mut fact = Float::with_val(wp, 2);
        let mut xp = Float::with_val(wp, x_pow / &x);
        let mut prev = Float::with_val(wp, f64::INFINITY);
        for j in 1..=pmax {
            let term = Float::with_val(wp, &b[2 * j] * &poch) * &xp / &fact;
            let mag = Float::with_val(wp, term.abs_ref());
            if mag > prev {
                break;
            }
            sum += &term;
            if mag <= Float::with_val(wp, sum.abs_ref()) * &tol {
                break;
            }
            prev = mag;
            let j2 = 2 * j as u32;
            poch *= Float::with_val(wp, &s + (j2 - 1));
            poch *= Float::with_val(wp, &s + j2);
            fact *= (j2 + 1) * (j2 + 2);
            xp /= &x2;
        }
        out.push(Float::with_val(prec, sum));
        for (p, r) in pw.iter_mut().zip(&step) {
            *p *= r;
        }
    }
    out
}

/// `ζ(1 − m/2, num/den)` for `m = m0, m0+1, …` via Hurwitz's formula
/// `ζ(1 − s, a) = 2Γ(s)(2π)^{−s} Σ_{n≥1} cos(πs/2 − 2πna) n^{−s}`, grouping `n` by
/// residue mod `den`.
pub fn hurwitz_reflected_ladder_mp(num: u32, den: u32, m0: u32, count: usize, prec: u32) -> Vec<Float> {
    let wp = prec + 32;
    let pi = Float::with_val(wp, Constant::Pi);
    let two_pi = Float::with_val(wp, &pi * 2u32);
    let ladders: Vec<Vec<Float>> = (1..=den)
        .map(|r| hurwitz_half_ladder_mp(&(Float::with_val(wp, r) / den), m0, count, wp))
        .collect();
    (0..count)
        .map(|i| {
            let s = Float::with_val(wp, m0 as usize + i) / 2u32;
            let mut total = Float::new(wp);
            for (idx, lad) in ladders.iter().enumerate() {
                let r = idx as u32 + 1;
                let mut arg = Float::with_val(wp, &s * &pi) / 2u32;
                arg -= Float::with_val(wp, &two_pi * (r * num)) / den;
                total += Float::with_val(wp, &lad[i] * arg.cos());
            }
            total *= Float::with_val(wp, den).pow(Float::with_val(wp, -&s));
            let gamma = Float::with_val(wp, s.gamma_ref());
            let scale = Float::with_val(wp, (&two_pi).pow(Float::with_val(wp, -&s)));
            Float::with_val(prec, total * gamma * scale * 2u32)
        })
        .collect()
}
