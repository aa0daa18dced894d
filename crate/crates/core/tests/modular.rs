use num_complex::Complex64;
use rug::Integer;
use std::f64::consts::PI;

use sqrtlat::modular::expansions::theta_series;
use sqrtlat::modular::{
    g_expansion, g_value, kernel_k, lambda_j, q_expansions, theta, HalfIntSeries, UpperHalfPoint,
};

fn pt(re: f64, im: f64) -> UpperHalfPoint {
    UpperHalfPoint::new(re, im).unwrap()
}

/// λ = θ₂⁴/θ₃⁴ from the nome `e^{iπτ}`, summed directly.
fn lambda_oracle(tau: Complex64) -> Complex64 {
    let q = |e: f64| (Complex64::i() * PI * e * tau).exp();
    let mut t2 = Complex64::new(0.0, 0.0);
    let mut t3 = Complex64::new(1.0, 0.0);
    for n in 0..40 {
        let h = n as f64 + 0.5;
        t2 += 2.0 * q(h * h);
        if n > 0 {
            t3 += 2.0 * q((n * n) as f64);
        }
    }
    t2.powi(4) / t3.powi(4)
}

#[test]
fn theta_cubed_counts_sums_of_three_squares() {
    let cube = theta_series(48).pow(3);
    for k in 0..6i64 {
        let mut count = 0i64;
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    if a * a + b * b + c * c == k {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(cube.coeff(4 * k).unwrap(), Integer::from(count), "q^{k}/2");
    }
    let expected = [1, 6, 12, 8, 6, 24];
    for (k, e) in expected.iter().enumerate() {
        assert_eq!(cube.coeff(4 * k as i64).unwrap(), *e);
    }
}

#[test]
fn hauptmodul_expansion() {
    let qe = q_expansions(16).unwrap();
    assert_eq!(qe.j.valuation(), Some(-4));
    for (k, c) in [(-4i64, 1), (0, 24), (4, 276), (8, 2048)] {
        assert_eq!(qe.j.coeff(k).unwrap(), c, "exponent {k}/8");
    }
}

#[test]
fn cusp_one_lambda_combination() {
    // −2^{−12}·(−16λ²/(1 − λ)) = q + 24q² + 300q³ + …
    let qe = q_expansions(32).unwrap();
    let one = HalfIntSeries::constant(Integer::from(1), 32);
    let inv = one.sub(&qe.lambda).reciprocal().unwrap();
    let s = qe.lambda.pow(2).mul(&inv).scale(&Integer::from(16));
    let s = s.div_scalar_exact(&Integer::from(4096)).unwrap();
    assert_eq!(s.valuation(), Some(8));
    for (k, c) in [(8i64, 1), (16, 24), (24, 300)] {
        assert_eq!(s.coeff(k).unwrap(), c);
    }
}

#[test]
fn g0_is_theta_cubed() {
    let g0 = g_expansion(0, 64).unwrap();
    let cube = theta_series(64).pow(3);
    assert_eq!(g0.terms().collect::<Vec<_>>(), cube.terms().collect::<Vec<_>>());
}

#[test]
fn first_coefficient_near_leading_approximation() {
    let a11 = g_expansion(1, 8).unwrap().coeff(4).unwrap().to_f64();
    assert_eq!(a11, 252.0);
    let lead = (2.0 * PI).exp() / 2.0;
    assert!((a11 - lead).abs() < PI.exp(), "{a11} vs {lead}");
}

#[test]
fn lambda_matches_theta_constants_and_inversion() {
    for (re, im) in [(0.1, 0.9), (-0.4, 1.3), (0.7, 0.6), (0.0, 2.0), (0.95, 1.1)] {
        let tau = Complex64::new(re, im);
        let (lam, _) = lambda_j(pt(re, im));
        let oracle = lambda_oracle(tau);
        assert!((lam - oracle).norm() < 1e-11 * oracle.norm().max(1.0), "λ({tau}) = {lam} vs {oracle}");
        let inv = -1.0 / tau;
        let (lam_inv, _) = lambda_j(pt(inv.re, inv.im));
        assert!((lam_inv - (1.0 - oracle)).norm() < 1e-10, "λ(−1/τ) at {tau}");
    }
    let (l, j) = lambda_j(pt(0.0, 1.0));
    assert!((l - 0.5).norm() < 1e-14);
    assert!((j - 64.0).norm() < 1e-11);
}

#[test]
fn theta_at_2i_by_direct_series() {
    let direct: f64 = 1.0 + 2.0 * (1..20).map(|n| (-2.0 * PI * (n * n) as f64).exp()).sum::<f64>();
    assert!((theta(pt(0.0, 2.0)).re - direct).abs() < 1e-15);
    assert!((direct - 1.0037349).abs() < 1e-7);
}

#[test]
fn kernel_matches_partial_sum_of_forms() {
    let tau = pt(0.0, 8.0);
    let z = pt(0.0, 1.2);
    let k = kernel_k(tau, z).unwrap();
    let t = tau.to_complex();
    let partial: Complex64 = (0..=12)
        .map(|n| g_value(n, z).unwrap() * (Complex64::i() * PI * n as f64 * t).exp())
        .sum();
    assert!((k - partial).norm() < 1e-8, "{k} vs {partial}");
}

#[test]
fn kernel_is_two_periodic_in_z() {
    let tau = pt(0.2, 1.4);
    for (re, im) in [(0.3, 0.8), (-0.6, 1.1), (0.9, 0.5)] {
        let a = kernel_k(tau, pt(re, im)).unwrap();
        let b = kernel_k(tau, pt(re + 2.0, im)).unwrap();
        assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
    }
}
