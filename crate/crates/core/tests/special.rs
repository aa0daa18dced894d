mod common;

use common::cosine_sum;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

use sqrtlat::special::{default_phi, hurwitz_zeta, phi, phi_direct, psi, psi_second_moment, PsiEvaluator};

#[test]
fn functional_equation_against_cosine_sum() {
    for z in [Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.5), Complex64::new(2.2, 0.0)] {
        let lhs = phi(z).unwrap() + phi(-z).unwrap();
        let rhs = cosine_sum(z, 4000);
        assert!((lhs - rhs).norm() < 1e-8, "z = {z}: {lhs} vs {rhs}");
    }
}

#[test]
fn psi_is_phi_symmetrization() {
    for x in [4.0f64, 25.0, 100.0] {
        let r = x.sqrt();
        let sym = phi(Complex64::new(r, 0.0)).unwrap() + phi(Complex64::new(-r, 0.0)).unwrap();
        let p = psi(x).unwrap();
        assert!((p - sym.re).abs() < 1e-8, "Ψ({x}) = {p} vs {sym}");
        assert!(sym.im.abs() < 1e-8);
    }
}

#[test]
fn constant_taylor_coefficient() {
    let c = default_phi().taylor_coefficients(4);
    let z = hurwitz_zeta(0.5, 0.375).unwrap() / 2f64.sqrt();
    assert!((c[0] - z).abs() < 1e-13 * z.abs(), "{} vs {z}", c[0]);
}

#[test]
fn taylor_and_direct_agree_across_region_boundaries() {
    let ev = default_phi();
    for z in [
        Complex64::new(0.25, 0.0),
        Complex64::new(0.3, 0.4),
        Complex64::new(1.0, -2.0),
        Complex64::new(3.0, 4.0),
        Complex64::new(5.9, 0.5),
    ] {
        let a = ev.phi_taylor(z).unwrap();
        let b = phi_direct(z);
        assert!((a - b).norm() < 1e-9 * b.norm().max(1e-3), "z = {z}: {a} vs {b}");
    }
}

#[test]
fn residue_at_origin() {
    let z = Complex64::new(1e-3, 0.0);
    assert!((z * phi(z).unwrap() - 1.0 / (2.0 * PI)).norm() < 1e-3);
}

#[test]
fn psi_moment_small_t_has_consistent_error() {
    let m = psi_second_moment(&PsiEvaluator::default(), 200.0).unwrap();
    assert!(m.integral > 0.0);
    assert!((m.normalized - m.integral / (200.0 * 200f64.ln())).abs() < 1e-12);
    assert!(m.err < 1e-6 * m.integral, "{m:?}");
    assert!(psi_second_moment(&PsiEvaluator::default(), 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn psi_matches_cosine_sum(x in 1.0f64..400.0) {
        let oracle = cosine_sum(Complex64::new(x.sqrt(), 0.0), 8000);
        let p = psi(x).unwrap();
        prop_assert!((p - oracle.re).abs() < 1e-8 * oracle.re.abs().max(1.0), "Ψ({}) = {} vs {}", x, p, oracle.re);
    }

    #[test]
    fn psi_matches_phi_in_taylor_range(x in 1.0f64..36.0) {
        let r = x.sqrt();
        let sym = phi(Complex64::new(r, 0.0)).unwrap() + phi(Complex64::new(-r, 0.0)).unwrap();
        prop_assert!((psi(x).unwrap() - sym.re).abs() < 1e-8);
    }
}
