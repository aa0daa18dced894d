use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::modular::GroupElement;

/// `e(x) = e^{2πix}`.
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut r = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                r = -r;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            r = -r;
        }
        a %= n;
    }
    if n == 1 {
        r
    } else {
        0
    }
}

/// Kronecker symbol `(a/n)`, extended to `n ≤ 0` and even `n` in the standard way.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut r = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            r = -r;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let m8 = a.rem_euclid(8);
        if m8 == 3 || m8 == 5 {
            r = -r;
        }
    }
    if n == 1 {
        r
    } else {
        r * jacobi(a, n)
    }
}

/// `ε_d`: 1 for `d ≡ 1`, `i` for `d ≡ 3 (mod 4)`, and 0 for even `d`.
pub fn epsilon(d: i64) -> Complex64 {
    match d.rem_euclid(4) {
        1 => Complex64::new(1.0, 0.0),
        3 => Complex64::new(0.0, 1.0),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Value of the theta multiplier, a complex number of modulus one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiplierValue(pub Complex64);

impl MultiplierValue {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn powi(&self, k: i32) -> Complex64 {
        self.0.powi(k)
    }
}

/// ν_θ depends only on the bottom row of γ.
pub(crate) fn nu_theta_cd(c: i64, d: i64) -> Complex64 {
    if c == 0 {
        // ±T^{2k}: j(γ,τ)^{1/2} = i when d = −1
        return if d == 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, -1.0) };
    }
    if c < 0 {
        return Complex64::new(0.0, 1.0) * nu_theta_cd(-c, -d);
    }
    if c % 2 == 0 {
        epsilon(d).inv() * kronecker(2 * c, d) as f64
    } else {
        e(-1.0 / 8.0) * epsilon(c) * kronecker(2 * d, c) as f64
    }
}

/// Multiplier system of θ: `θ(γτ) = ν_θ(γ)(cτ + d)^{1/2}θ(τ)`.
pub fn nu_theta(gamma: &GroupElement) -> Result<MultiplierValue> {
    if gamma.det() != 1 || !gamma.in_theta_group() {
        return Err(Error::invalid(format!("{gamma} is not in the theta group")));
    }
    Ok(MultiplierValue(nu_theta_cd(gamma.c, gamma.d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(0, 3), 0);
        for a in -20..20 {
            assert_eq!(kronecker(a, 1), 1);
        }
        // quadratic residues mod 7 are 1, 2, 4
        let qr: Vec<i64> = (1..7).filter(|a| kronecker(*a, 7) == 1).collect();
        assert_eq!(qr, vec![1, 2, 4]);
        assert_eq!(kronecker(3, 8), -1);
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(5, 0), 0);
    }

    #[test]
    fn jacobi_matches_euler_criterion_for_primes() {
        for &p in &[3i64, 5, 7, 11, 13, 101] {
            for a in 0..p {
                let euler = {
                    let mut r = 1i64;
                    for _ in 0..(p - 1) / 2 {
                        r = r * a % p;
                    }
                    if r == p - 1 {
                        -1
                    } else {
                        r as i32
                    }
                };
                assert_eq!(kronecker(a, p), euler, "a = {a}, p = {p}");
            }
        }
    }

    #[test]
    fn basic_multiplier_values() {
        assert_eq!(nu_theta(&GroupElement::t2(1)).unwrap().value(), Complex64::new(1.0, 0.0));
        let s = nu_theta(&GroupElement::S).unwrap().value();
        assert!((s - e(-1.0 / 8.0)).norm() < 1e-15);
        assert!(nu_theta(&GroupElement { a: 1, b: 1, c: 0, d: 1 }).is_err());
        let m = GroupElement::new(3, 2, 4, 3).unwrap();
        let v = nu_theta(&m).unwrap().value();
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cusp_one_parameter() {
        // generator of the stabilizer of the cusp 1
        let g = GroupElement::new(0, 1, -1, 2).unwrap();
        let v = nu_theta(&g).unwrap().powi(3);
        assert!((v - e(3.0 / 8.0)).norm() < 1e-14);
    }

    #[test]
    fn negation_rule() {
        let g = GroupElement::new(1, 0, -2, 1).unwrap();
        let a = nu_theta(&g).unwrap().value();
        let b = nu_theta(&g.neg()).unwrap().value();
        assert!((a - Complex64::new(0.0, 1.0) * b).norm() < 1e-15);
    }
}
