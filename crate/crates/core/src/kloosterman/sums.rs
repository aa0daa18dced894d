use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use super::multiplier::{e, nu_theta_cd};
use crate::error::{Error, Result};

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` (`m ≥ 1`, `gcd(a, m) = 1`), in `[0, m)`.
pub(crate) fn mod_inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

/// Kloosterman sum `S(m, n, c)` of the weight-3/2 multiplier `ν_θ³` at the cusp ∞.
///
/// Sums `ν_θ(γ)^{−3} e((ma + nd)/2c)` over `γ = (a b; c d) ∈ Γ_θ` with `d` running
/// over residues mod `2c`.
pub fn kloosterman_s(m: i64, n: i64, c: i64) -> Result<Complex64> {
    if c < 1 {
        return Err(Error::invalid(format!("modulus c = {c} must be positive")));
    }
    let two_c = 2 * c;
    let mut total = Complex64::new(0.0, 0.0);
    if c % 2 == 0 {
        for d in (1..two_c).step_by(2) {
            if gcd(d, c) != 1 {
                continue;
            }
            let a = mod_inverse(d, two_c);
            let phase = ((m * a + n * d).rem_euclid(two_c)) as f64 / two_c as f64;
            total += nu_theta_cd(c, d).powi(-3) * e(phase);
        }
    } else {
        for d in (0..two_c).step_by(2) {
            if gcd(d, c) != 1 {
                continue;
            }
            let mut a = mod_inverse(d, c);
            if a % 2 == 1 {
                a += c;
            }
            let phase = ((m * a + n * d).rem_euclid(two_c)) as f64 / two_c as f64;
            total += nu_theta_cd(c, d).powi(-3) * e(phase);
        }
    }
    Ok(total)
}

/// Kloosterman sum `S̃(m, n, c)` attached to the cusp 1, for odd `c`.
///
/// Sums over `D mod c` coprime to `c` with odd `A ≡ D^{−1} (mod c)`, weighted by
/// `ν_θ` of the bottom row `(−D, c + D)` to the power −3 and `e((mA + 2n₊D)/2c)`,
/// `n₊ = n + 3/8`.
pub fn kloosterman_s_tilde(m: i64, n: i64, c: i64) -> Result<Complex64> {
    if c < 1 || c % 2 == 0 {
        return Err(Error::invalid(format!("S̃ needs an odd positive modulus, got c = {c}")));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for d in 1..=c {
        if gcd(d, c) != 1 {
            continue;
        }
        let mut a = mod_inverse(d, c);
        if a % 2 == 0 {
            a += c;
        }
        // (mA + 2(n + 3/8)D)/(2C) with the 3/8 kept exact in eighths
        let num8 = 8 * m * a + (16 * n + 6) * d;
        let phase = num8.rem_euclid(16 * c) as f64 / (16 * c) as f64;
        total += nu_theta_cd(-d, c + d).powi(-3) * e(phase);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct Key {
    tilde: bool,
    m: i64,
    n: i64,
    c: i64,
}

/// Memo of Kloosterman sums keyed by `(m, n, c)`, with JSON persistence.
#[derive(Default)]
pub struct KloostermanCache {
    map: RwLock<HashMap<Key, Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    entries: Vec<(bool, i64, i64, i64, f64, f64)>,
}

impl KloostermanCache {
    pub fn global() -> &'static KloostermanCache {
        static CACHE: OnceLock<KloostermanCache> = OnceLock::new();
        CACHE.get_or_init(KloostermanCache::default)
    }

    fn get(&self, key: Key, f: impl FnOnce() -> Result<Complex64>) -> Result<Complex64> {
        if let Some(v) = self.map.read().expect("cache poisoned").get(&key) {
            return Ok(*v);
        }
        let v = f()?;
        self.map.write().expect("cache poisoned").insert(key, v);
        Ok(v)
    }

    pub fn s(&self, m: i64, n: i64, c: i64) -> Result<Complex64> {
        self.get(Key { tilde: false, m, n, c }, || kloosterman_s(m, n, c))
    }

    pub fn s_tilde(&self, m: i64, n: i64, c: i64) -> Result<Complex64> {
        self.get(Key { tilde: true, m, n, c }, || kloosterman_s_tilde(m, n, c))
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let map = self.map.read().expect("cache poisoned");
        let mut entries: Vec<_> = map
            .iter()
            .map(|(k, v)| (k.tilde, k.m, k.n, k.c, v.re, v.im))
            .collect();
        entries.sort_by_key(|e| (e.0, e.1, e.2, e.3));
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, serde_json::to_string(&CacheFile { entries })?)?;
        Ok(())
    }

    pub fn load(&self, path: &Path) -> Result<usize> {
        let file: CacheFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let mut map = self.map.write().expect("cache poisoned");
        let n = file.entries.len();
        for (tilde, m, nn, c, re, im) in file.entries {
            map.insert(Key { tilde, m, n: nn, c }, Complex64::new(re, im));
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    /// Brute-force oracle over all pairs (a, d) mod 2c satisfying the coset conditions.
    fn s_bruteforce(m: i64, n: i64, c: i64) -> Complex64 {
        let mut t = Complex64::new(0.0, 0.0);
        for d in 0..2 * c {
            for a in 0..2 * c {
                // need b = (ad − 1)/c integral with the theta-group parity
                if (a * d - 1) % c != 0 {
                    continue;
                }
                let b = (a * d - 1) / c;
                let p = [a, b, c, d].map(|x| x.rem_euclid(2));
                if p != [1, 0, 0, 1] && p != [0, 1, 1, 0] {
                    continue;
                }
                if c % 2 == 0 && (a * d).rem_euclid(2 * c) != 1 {
                    continue;
                }
                t += nu_theta_cd(c, d).powi(-3) * e((m * a + n * d) as f64 / (2 * c) as f64);
            }
        }
        t
    }

    #[test]
    fn inverse() {
        for m in 2..40 {
            for a in 1..m {
                if gcd(a, m) == 1 {
                    assert_eq!(a * mod_inverse(a, m) % m, 1);
                }
            }
        }
    }

    #[test]
    fn modulus_one() {
        for m in -3..4 {
            for n in -3..4 {
                let v = kloosterman_s(m, n, 1).unwrap();
                assert!((v - e(3.0 / 8.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn small_even_modulus() {
        let v = kloosterman_s(-1, 1, 2).unwrap();
        assert!((v - Complex64::new(1.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn moduli_match_bruteforce() {
        for c in [2, 3, 4, 5, 6, 8, 9, 10, 15] {
            for (m, n) in [(-1, 1), (2, 3), (-3, 5)] {
                let v = kloosterman_s(m, n, c).unwrap();
                let w = s_bruteforce(m, n, c);
                assert!((v - w).norm() < 1e-12, "c = {c}: {v} vs {w}");
            }
        }
    }

    #[test]
    fn tilde_rejects_even() {
        assert!(kloosterman_s_tilde(1, 1, 4).is_err());
        assert!(kloosterman_s(1, 1, 0).is_err());
    }

    #[test]
    fn tilde_trivial_bound() {
        for c in (1..30).step_by(2) {
            let v = kloosterman_s_tilde(-3, 2, c).unwrap();
            assert!(v.norm() <= c as f64 + 1e-12);
        }
    }

    #[test]
    fn cache_round_trip() {
        let cache = KloostermanCache::default();
        let a = cache.s(-2, 3, 7).unwrap();
        let b = cache.s_tilde(-2, 3, 7).unwrap();
        assert_eq!(cache.len(), 2);
        let dir = std::env::temp_dir().join(format!("sqrtlat-kl-{}", std::process::id()));
        let path = dir.join("kloosterman.json");
        cache.save(&path).unwrap();
        let other = KloostermanCache::default();
        assert_eq!(other.load(&path).unwrap(), 2);
        assert_eq!(other.s(-2, 3, 7).unwrap(), a);
        assert_eq!(other.s_tilde(-2, 3, 7).unwrap(), b);
        std::fs::remove_dir_all(dir).ok();
    }
}
