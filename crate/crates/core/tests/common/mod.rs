//! Oracles shared by several test targets.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// `Σ_{n≥1} 2cos(π((3n − 1)/4 − z²/n))/√n` from partial sums over whole periods of 8.
///
/// The partial sum over `J` blocks behaves like `S + Σ_k a_k J^{−1/2−k}`, so five
/// block counts determine `S` by solving a small linear system.
pub fn cosine_sum(z: Complex64, j0: usize) -> Complex64 {
    let z2 = z * z;
    let term = |n: usize| {
        let a = PI * (3.0 * n as f64 - 1.0) / 4.0;
        let arg = Complex64::new(a, 0.0) - PI * z2 / n as f64;
        2.0 * arg.cos() / (n as f64).sqrt()
    };
    let js: Vec<usize> = (0..5).map(|k| j0 << k).collect();
    let mut partials = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut n = 1;
    for &j in &js {
        while n <= 8 * j {
            acc += term(n);
            n += 1;
        }
        partials.push(acc);
    }
    // unknowns: S, a_0..a_3; rows: partial(J) = S + Σ a_k J^{−1/2−k}
    let dim = js.len();
    let mut m: Vec<Vec<Complex64>> = js
        .iter()
        .zip(&partials)
        .map(|(&j, &p)| {
            let mut row = vec![Complex64::new(1.0, 0.0)];
            row.extend((0..dim - 1).map(|k| Complex64::new((j as f64).powf(-0.5 - k as f64), 0.0)));
            row.push(p);
            row
        })
        .collect();
    for col in 0..dim {
        let piv = (col..dim).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())).unwrap();
        m.swap(col, piv);
        for r in 0..dim {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=dim {
                    let v = m[col][c];
                    m[r][c] -= f * v;
                }
            }
        }
    }
    m[0][dim] / m[0][0]
}

/// θ(τ) by direct summation; adequate for `Im τ ≥ 1/40`.
pub fn theta_direct(tau: Complex64) -> Complex64 {
    let mut s = Complex64::new(1.0, 0.0);
    for n in 1..120 {
        s += 2.0 * (Complex64::i() * PI * (n * n) as f64 * tau).exp();
    }
    s
}

pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A Γ_θ matrix with bottom row `(c, d)`.
pub fn complete(c: i64, d: i64) -> (i64, i64, i64, i64) {
    let (g, x, y) = egcd(d, -c);
    assert_eq!(g.abs(), 1);
    let (mut a, mut b) = (x * g, y * g);
    assert_eq!(a * d - b * c, 1);
    // bring (a, b; c, d) to ≡ I or ≡ S mod 2; adding the bottom row flips the
    // parity of b when c is even and of a when c is odd
    let fix = if c.rem_euclid(2) == 0 { b.rem_euclid(2) == 1 } else { a.rem_euclid(2) == 1 };
    if fix {
        a += c;
        b += d;
    }
    (a, b, c, d)
}
