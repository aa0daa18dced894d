use num_complex::Complex64;
use std::f64::consts::PI;

use sqrtlat::basis::{
    eval_laplace, eval_phi_approx, generating_f, generating_f_kernel, laplace_terms, ApproxParams, CollocationSolver,
    ContourEvaluator, EvalMethod,
};
use sqrtlat::modular::{g_coefficients, UpperHalfPoint};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn collocation_delta_property() {
    let s = CollocationSolver::new(96).unwrap();
    for m in 0..=30usize {
        let row = s.eval_all(m as f64).unwrap();
        for (n, r) in row.iter().enumerate().take(31) {
            let want = if n == m { 1.0 } else { 0.0 };
            assert!((r.re() - want).abs() < 1e-10, "f_{n}({m}) = {}", r.re());
        }
    }
    assert!((s.eval(0, 0.0).unwrap().re() - 1.0).abs() < 1e-12);
}

#[test]
fn collocation_refines_with_size() {
    let a = CollocationSolver::new(96).unwrap();
    let b = CollocationSolver::new(128).unwrap();
    let fa = a.eval_all(0.5).unwrap();
    let fb = b.eval_all(0.5).unwrap();
    for n in 0..=40 {
        assert!((fa[n].re() - fb[n].re()).abs() < 1e-8, "n = {n}");
    }
}

#[test]
fn degenerate_truncation_is_rejected() {
    assert!(CollocationSolver::new(4).is_err());
    assert!(CollocationSolver::new(0).is_err());
}

#[test]
fn real_values_have_negligible_imaginary_part() {
    let s = CollocationSolver::new(96).unwrap();
    for x in [0.3, 2.5, 7.25, 19.9] {
        for r in s.eval_all(x).unwrap().iter().take(20) {
            assert!(r.value.im.abs() <= r.err.max(1e-14), "{r:?}");
            assert_eq!(r.method, EvalMethod::Collocation);
        }
    }
}

#[test]
fn negative_integers_give_expansion_coefficients() {
    // f_n(−m) is the coefficient a(n, m) of g_n
    for n in 1..=3usize {
        let exact = g_coefficients(n, 4).unwrap();
        let ev = ContourEvaluator::new(n);
        for m in 1..=4usize {
            let v = ev.eval(real(-(m as f64)), 128).unwrap();
            let want = exact[m - 1].to_f64();
            assert!((v.re() - want).abs() < 1e-9 * want.abs().max(1.0), "f_{n}(−{m}) = {} vs {want}", v.re());
        }
    }
    let lead = (2.0 * PI).exp() / 2.0;
    let f11 = ContourEvaluator::new(1).eval(real(-1.0), 128).unwrap().re();
    assert!((f11 - lead).abs() / lead < 0.15);
}

#[test]
fn contour_delta_property() {
    for n in [0usize, 1, 4, 10] {
        let ev = ContourEvaluator::new(n);
        for m in 0..=10usize {
            let v = ev.eval(real(m as f64), 128).unwrap().re();
            let want = if n == m { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12, "f_{n}({m}) = {v}");
        }
    }
}

#[test]
fn contour_matches_collocation() {
    let s = CollocationSolver::new(96).unwrap();
    for (n, x) in [(12usize, 0.7), (3, 4.4), (25, 13.1)] {
        let a = s.eval(n, x).unwrap().re();
        let b = ContourEvaluator::new(n).eval(real(x), 128).unwrap().re();
        assert!((a - b).abs() < 1e-7, "f_{n}({x}): {a} vs {b}");
    }
}

#[test]
fn laplace_series_matches_collocation() {
    let s = CollocationSolver::new(CollocationSolver::recommended_size(20, 36.0)).unwrap();
    let x = 35.5;
    let a = s.eval(20, x).unwrap().re();
    let b = eval_laplace(20, x, laplace_terms(20, x, 1e-16, 4096)).unwrap().re();
    assert!((a - b).abs() < 1e-8 * b.abs(), "{a} vs {b}");
    assert_eq!(eval_laplace(20, 36.0, 40).unwrap().re(), 0.0);
    assert!(eval_laplace(20, 19.5, 40).is_err());
}

#[test]
fn phi_approximation_near_pole_and_far_out() {
    let p = ApproxParams::default();
    let v = eval_phi_approx(50, real(50.0), &p).unwrap();
    assert!((v.re() - 1.0).abs() < 1e-6, "{v:?}");
    // deep in the region the approximation tracks the collocation value
    let s = CollocationSolver::new(CollocationSolver::recommended_size(30, 80.0)).unwrap();
    for x in [60.3, 75.7] {
        let a = s.eval(30, x).unwrap().re();
        let b = eval_phi_approx(30, real(x), &p).unwrap();
        assert!((a - b.re()).abs() <= b.err.max(1e-10), "x = {x}: {a} vs {b:?}");
    }
    assert!(eval_phi_approx(100, real(5.0), &p).is_err());
}

#[test]
fn generating_function_satisfies_functional_equation() {
    let g = generating_f(UpperHalfPoint::new(0.3, 0.5).unwrap(), 1.7, 200).unwrap();
    assert!(g.feq_residual < 1e-8, "{g:?}");
    let t = UpperHalfPoint::new(0.3, 1.2).unwrap();
    let a = generating_f(t, 1.7, 60).unwrap().value;
    let b = generating_f_kernel(t, 1.7, 64).unwrap();
    assert!((a - b).norm() < 1e-6, "{a} vs {b}");
    assert!(generating_f(UpperHalfPoint::new(0.0, 0.05).unwrap(), 1.7, 50).is_err());
}
