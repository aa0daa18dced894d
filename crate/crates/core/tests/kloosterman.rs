mod common;

use common::{complete, theta_direct};
use num_complex::Complex64;
use std::f64::consts::PI;

use sqrtlat::kloosterman::{
    e, kloosterman_s, kloosterman_s_tilde, nu_theta, rademacher_a, rademacher_a_tilde, CoeffTable, CuspKind,
};
use sqrtlat::modular::{g_coefficients, g_cusp1_coefficients, GroupElement};

/// ν_θ(γ) from `θ(γτ) = ν_θ(γ)(cτ + d)^{1/2}θ(τ)` at a point with `cτ + d = ±i`.
fn nu_oracle(a: i64, b: i64, c: i64, d: i64) -> Complex64 {
    assert_ne!(c, 0);
    let s = if c > 0 { Complex64::i() } else { -Complex64::i() };
    let tau = (s - d as f64) / c as f64;
    let g = (a as f64 * tau + b as f64) / (c as f64 * tau + d as f64);
    theta_direct(g) / (s.sqrt() * theta_direct(tau))
}

fn s_oracle(m: i64, n: i64, c: i64) -> Complex64 {
    let two_c = 2 * c;
    let mut total = Complex64::new(0.0, 0.0);
    for d in 0..two_c {
        for a in 0..two_c {
            let ok = if c % 2 == 0 {
                (a * d).rem_euclid(two_c) == 1
            } else {
                a % 2 == 0 && d % 2 == 0 && (a * d).rem_euclid(c) == 1 % c
            };
            if !ok {
                continue;
            }
            let b = (a * d - 1) / c;
            let nu = nu_oracle(a, b, c, d);
            total += nu.powi(-3) * (Complex64::i() * 2.0 * PI * (m * a + n * d) as f64 / two_c as f64).exp();
        }
    }
    total
}

fn s_tilde_oracle(m: i64, n: i64, c: i64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for dd in 1..=c {
        for aa in (1..2 * c).step_by(2) {
            if (aa * dd).rem_euclid(c) != 1 % c {
                continue;
            }
            let (a, b, cc, d) = complete(-dd, c + dd);
            let nu = nu_oracle(a, b, cc, d);
            let phase = (m as f64 * aa as f64 + 2.0 * (n as f64 + 0.375) * dd as f64) / (2 * c) as f64;
            total += nu.powi(-3) * (Complex64::i() * 2.0 * PI * phase).exp();
        }
    }
    total
}

#[test]
fn multiplier_matches_theta_transformation() {
    for (c, d) in [(1, 0), (2, 1), (2, -3), (4, 1), (3, 2), (5, -2), (6, 7), (7, 4), (-3, 2), (-4, 5)] {
        let (a, b, c, d) = complete(c, d);
        let g = GroupElement::new(a, b, c, d).unwrap();
        let v = nu_theta(&g).unwrap().value();
        let o = nu_oracle(a, b, c, d);
        assert!((v - o).norm() < 1e-10, "ν({a} {b}; {c} {d}) = {v} vs {o}");
    }
    let s = nu_theta(&GroupElement::new(0, -1, 1, 0).unwrap()).unwrap().value();
    assert!((s - e(-1.0 / 8.0)).norm() < 1e-14);
}

#[test]
fn sums_match_residue_enumeration() {
    for c in 1..=10 {
        for m in -3..=3 {
            for n in -2..=4 {
                let v = kloosterman_s(m, n, c).unwrap();
                let o = s_oracle(m, n, c);
                assert!((v - o).norm() < 1e-9, "S({m},{n},{c}) = {v} vs {o}");
            }
        }
    }
}

#[test]
fn tilde_sums_match_residue_enumeration() {
    for c in [1, 3, 5, 7, 9] {
        for m in -3..=3 {
            for n in -1..=3 {
                let v = kloosterman_s_tilde(m, n, c).unwrap();
                let o = s_tilde_oracle(m, n, c);
                assert!((v - o).norm() < 1e-9, "S̃({m},{n},{c}) = {v} vs {o}");
            }
        }
    }
}

#[test]
fn small_moduli_closed_forms() {
    for (m, n) in [(0, 0), (1, 5), (-4, 2), (7, -3)] {
        assert!((kloosterman_s(m, n, 1).unwrap() - e(3.0 / 8.0)).norm() < 1e-14);
    }
    let v = kloosterman_s(-1, 1, 2).unwrap();
    assert!((v - Complex64::new(1.0, -1.0)).norm() < 1e-14, "{v}");
}

#[test]
fn relation_between_cusps() {
    for m in 0..=10i64 {
        let sign = if matches!(m % 4, 0 | 3) { -1.0 } else { 1.0 };
        for n in 0..=10 {
            for c in (1..=15).step_by(2) {
                let lhs = e(-3.0 / 8.0) * kloosterman_s(m, 8 * n + 3, 2 * c).unwrap();
                let rhs = sign * 2f64.sqrt() * kloosterman_s_tilde(m, n, c).unwrap();
                assert!((lhs - rhs).norm() < 1e-12, "m={m} n={n} c={c}");
            }
        }
    }
}

#[test]
fn partial_sums_grow_slowly() {
    for (m, n) in [(1, 1), (1, 3), (2, 5), (3, 2), (5, 5)] {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 1..=500i64 {
            acc += kloosterman_s(-m, n, c).unwrap() / c as f64;
            let bound = 10.0 * ((m * n) as f64).powf(0.25) * (c as f64).powf(0.2);
            assert!(acc.norm() <= bound, "m={m} n={n} x={c}: {}", acc.norm());
        }
    }
}

#[test]
fn rademacher_values_are_real() {
    for m in 1..=4 {
        for n in 1..=4 {
            let v = rademacher_a(m, n, 120).unwrap();
            assert!(v.imag.abs() < 1e-9 * v.value.abs(), "a({m},{n}) imag {}", v.imag);
        }
        for n in 0..=3 {
            let v = rademacher_a_tilde(m, n, 119).unwrap();
            assert!(v.imag.abs() < 1e-9 * v.value.abs(), "ã({m},{n}) imag {}", v.imag);
        }
    }
}

#[test]
fn recorded_error_covers_expansion_gap() {
    for m in 1..=6i64 {
        let exact = g_coefficients(m as usize, 6).unwrap();
        let nus: Vec<i64> = (1..=6).collect();
        let rad = CoeffTable::from_rademacher(CuspKind::CuspInf, m, &nus, 200).unwrap();
        for (nu, ex) in nus.iter().zip(&exact) {
            let r = &rad.entries[nu];
            let gap = (r.value - ex.to_f64()).abs();
            assert!(gap <= r.err, "a({m},{nu}): gap {gap:.3e} err {:.3e}", r.err);
        }
    }
    for m in 1..=5i64 {
        let exact = g_cusp1_coefficients(m as usize, 6).unwrap();
        let nus: Vec<i64> = (0..=5).collect();
        let rad = CoeffTable::from_rademacher(CuspKind::CuspOne, m, &nus, 199).unwrap();
        for (nu, ex) in nus.iter().zip(&exact) {
            let r = &rad.entries[nu];
            let gap = (r.value - ex.to_f64()).abs();
            assert!(gap <= r.err, "ã({m},{nu}): gap {gap:.3e} err {:.3e}", r.err);
        }
    }
}

#[test]
fn expansion_table_matches_direct_coefficients() {
    let t = CoeffTable::from_expansion(CuspKind::CuspInf, 2, &[1, 2, 3]).unwrap();
    let direct = g_coefficients(2, 3).unwrap();
    for (nu, d) in [1i64, 2, 3].iter().zip(&direct) {
        assert_eq!(t.entries[nu].value, d.to_f64());
    }
    let back = CoeffTable::from_json(&t.to_json().unwrap()).unwrap();
    assert_eq!(back, t);
}
