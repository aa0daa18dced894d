use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::multiplier::e;
use super::sums::KloostermanCache;
use crate::error::{Error, Result};
use crate::modular::{g_coefficients, g_cusp1_coefficients};

/// Safety factor applied to the last dyadic block of the series.
const TAIL_SAFETY: f64 = 4.0;

/// A truncated coefficient series value with its heuristic tail estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub err: f64,
    /// Imaginary part of the assembled sum (zero in exact arithmetic).
    pub imag: f64,
}

/// Sums `S(c)·w(c)` over the given moduli.
///
/// The tail beyond `c_max` is estimated by partial summation: with
/// `P(x) = Σ_{c≤x} S(c)/c` and `W(c) = c·w(c)` decreasing, the tail is at most
/// `2 W(c_max) sup_{x>c_max} |P(x) − P(c_max)|`, and the supremum is replaced by the
/// oscillation of `P` over the last dyadic block. Rounding in `S(c)` (c terms) and in
/// `sinh(x/c)` (relative `x/c`) is added.
fn assemble(
    cs: &[i64],
    x: f64,
    sum: impl Fn(i64) -> Result<Complex64> + Sync,
    weight: impl Fn(i64) -> f64 + Sync,
) -> Result<SeriesValue> {
    let sums: Vec<Complex64> = cs.par_iter().map(|&c| sum(c)).collect::<Result<_>>()?;
    let total: Complex64 = cs.iter().zip(&sums).map(|(&c, s)| s * weight(c)).sum();
    let c_max = *cs.last().expect("non-empty");
    if c_max == 1 {
        return Ok(SeriesValue { value: total.re, err: total.norm(), imag: total.im });
    }
    let mut partial = Vec::with_capacity(cs.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for (&c, s) in cs.iter().zip(&sums) {
        acc += s / c as f64;
        partial.push((c, acc));
    }
    let oscillation = partial
        .iter()
        .filter(|(c, _)| 2 * c > c_max)
        .map(|(_, p)| (p - acc).norm())
        .fold(0.0, f64::max);
    let tail = 2.0 * c_max as f64 * weight(c_max) * oscillation.max(1.0 / c_max as f64);
    let rounding: f64 = cs
        .iter()
        .zip(&sums)
        .map(|(&c, s)| s.norm() * weight(c) * (2.0 + c as f64 + x / c as f64))
        .sum::<f64>()
        * f64::EPSILON;
    let err = TAIL_SAFETY * (tail + rounding);
    Ok(SeriesValue { value: total.re, err, imag: total.im })
}

/// Truncated series for `a_{m,n}`, the coefficient of `q^{n/2}` in `g_m`:
/// `e(−3/8) m^{−1/2} Σ_{c ≤ c_max} S(−m, n, c) c^{−1/2} sinh(2π√(mn)/c)`.
pub fn rademacher_a(m: i64, n: i64, c_max: i64) -> Result<SeriesValue> {
    if m < 1 || n < 1 {
        return Err(Error::invalid(format!("need m, n ≥ 1, got m = {m}, n = {n}")));
    }
    if c_max < 1 {
        return Err(Error::invalid(format!("c_max = {c_max} must be ≥ 1")));
    }
    let cs: Vec<i64> = (1..=c_max).collect();
    let x = 2.0 * PI * ((m * n) as f64).sqrt();
    let pre = e(-3.0 / 8.0) / (m as f64).sqrt();
    let cache = KloostermanCache::global();
    assemble(&cs, x, |c| Ok(pre * cache.s(-m, n, c)?), |c| (x / c as f64).sinh() / (c as f64).sqrt())
}

/// Truncated series for `ã_{m,n}` (cusp 1, odd moduli only):
/// `2 m^{−1/2} Σ_{odd c ≤ c_max} S̃(−m, n, c) c^{−1/2} sinh(2π√(2m(n+3/8))/c)`.
pub fn rademacher_a_tilde(m: i64, n: i64, c_max: i64) -> Result<SeriesValue> {
    if m < 1 || n < 0 {
        return Err(Error::invalid(format!("need m ≥ 1, n ≥ 0, got m = {m}, n = {n}")));
    }
    if c_max < 1 {
        return Err(Error::invalid(format!("c_max = {c_max} must be ≥ 1")));
    }
    let cs: Vec<i64> = (1..=c_max).step_by(2).collect();
    let x = 2.0 * PI * (2.0 * m as f64 * (n as f64 + 0.375)).sqrt();
    let pre = 2.0 / (m as f64).sqrt();
    let cache = KloostermanCache::global();
    assemble(&cs, x, |c| Ok(pre * cache.s_tilde(-m, n, c)?), |c| (x / c as f64).sinh() / (c as f64).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CuspKind {
    CuspInf,
    CuspOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffMethod {
    Expansion,
    Rademacher,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub value: f64,
    pub method: CoeffMethod,
    pub c_max: Option<i64>,
    pub err: f64,
}

/// Fourier coefficients of `g_m` at one cusp, indexed by `ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    pub kind: CuspKind,
    pub m: i64,
    pub entries: BTreeMap<i64, CoeffEntry>,
}

#[derive(Serialize, Deserialize)]
struct CoeffTableFile {
    kind: CuspKind,
    m: i64,
    c_max: Option<i64>,
    entries: Vec<(i64, f64, f64)>,
}

impl CoeffTable {
    /// Exact coefficients from the q-expansion, ν ranging over `nus`.
    pub fn from_expansion(kind: CuspKind, m: i64, nus: &[i64]) -> Result<Self> {
        if m < 0 || nus.iter().any(|&v| v < 0) {
            return Err(Error::invalid("negative index"));
        }
        let top = nus.iter().copied().max().unwrap_or(0);
        let vals = match kind {
            CuspKind::CuspInf => {
                let mut v = vec![rug::Integer::from(1)];
                if top > 0 {
                    v.extend(g_coefficients(m as usize, top as usize)?);
                }
                v
            }
            CuspKind::CuspOne => g_cusp1_coefficients(m as usize, top as usize + 1)?,
        };
        let entries = nus
            .iter()
            .map(|&nu| {
                let value = if kind == CuspKind::CuspInf && nu == 0 {
                    // constant term of g_m vanishes for m ≥ 1
                    if m == 0 { 1.0 } else { 0.0 }
                } else {
                    vals[nu as usize].to_f64()
                };
                (nu, CoeffEntry { value, method: CoeffMethod::Expansion, c_max: None, err: 0.0 })
            })
            .collect();
        Ok(CoeffTable { kind, m, entries })
    }

    /// Truncated Rademacher values.
    pub fn from_rademacher(kind: CuspKind, m: i64, nus: &[i64], c_max: i64) -> Result<Self> {
        let entries = nus
            .iter()
            .map(|&nu| {
                let v = match kind {
                    CuspKind::CuspInf => rademacher_a(m, nu, c_max)?,
                    CuspKind::CuspOne => rademacher_a_tilde(m, nu, c_max)?,
                };
                Ok((
                    nu,
                    CoeffEntry {
                        value: v.value,
                        method: CoeffMethod::Rademacher,
                        c_max: Some(c_max),
                        err: v.err,
                    },
                ))
            })
            .collect::<Result<_>>()?;
        Ok(CoeffTable { kind, m, entries })
    }

    fn c_max(&self) -> Option<i64> {
        self.entries.values().filter_map(|e| e.c_max).max()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = CoeffTableFile {
            kind: self.kind,
            m: self.m,
            c_max: self.c_max(),
            entries: self.entries.iter().map(|(&n, e)| (n, e.value, e.err)).collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: CoeffTableFile = serde_json::from_str(s)?;
        let method = if file.c_max.is_some() { CoeffMethod::Rademacher } else { CoeffMethod::Expansion };
        let entries = file
            .entries
            .into_iter()
            .map(|(n, value, err)| (n, CoeffEntry { value, method, c_max: file.c_max, err }))
            .collect();
        Ok(CoeffTable { kind: file.kind, m: file.m, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_term_is_sinh() {
        let v = rademacher_a(1, 1, 1).unwrap();
        assert!((v.value - (2.0 * PI).sinh()).abs() < 1e-10);
        assert!((v.value - 267.7448940410165).abs() < 1e-9);
        assert!(v.imag.abs() < 1e-9 * v.value.abs());
    }

    #[test]
    fn tilde_leading_term() {
        for m in 1..4 {
            for n in 0..4 {
                let v = rademacher_a_tilde(m, n, 1).unwrap();
                let x = 2.0 * PI * (2.0 * m as f64 * (n as f64 + 0.375)).sqrt();
                // S̃(−m, n, 1) = ν(−1, 2)^{−3} e((6 − 8m + 16n)/16) = (−1)^m
                let lead = if m % 2 == 0 { 1.0 } else { -1.0 } * x.exp() / (m as f64).sqrt();
                // sinh vs exp differ by e^{−x}/√m
                assert!((v.value - lead).abs() <= (-x).exp() / (m as f64).sqrt() + 1e-9 * lead.abs());
            }
        }
    }

    #[test]
    fn validation() {
        assert!(rademacher_a(0, 1, 5).is_err());
        assert!(rademacher_a(1, 1, 0).is_err());
        assert!(rademacher_a_tilde(1, -1, 5).is_err());
    }

    #[test]
    fn converges_towards_expansion() {
        let v = rademacher_a(1, 1, 200).unwrap();
        assert!((v.value - 252.0).abs() < 0.1, "{v:?}");
        assert!((v.value - 252.0).abs() <= v.err, "{v:?}");
        let w = rademacher_a_tilde(1, 0, 199).unwrap();
        assert!((w.value + 240.0).abs() < 0.2, "{w:?}");
    }

    #[test]
    fn table_json_round_trip() {
        let t = CoeffTable::from_rademacher(CuspKind::CuspOne, 2, &[0, 1, 2], 21).unwrap();
        let back = CoeffTable::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(t, back);
        let e = CoeffTable::from_expansion(CuspKind::CuspInf, 1, &[0, 1, 2]).unwrap();
        assert_eq!(e.entries[&1].value, 252.0);
        assert_eq!(CoeffTable::from_json(&e.to_json().unwrap()).unwrap(), e);
    }
}
