//! Distribution of `n^{1/4} f_n(x₀)` over `1 ≤ n ≤ n_max`.

use serde::Serialize;

use crate::basis::CollocationSolver;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct Histogram {
    pub x0: f64,
    pub values: Vec<f64>,
    /// `(bin_lo, bin_hi, count)`.
    pub bins: Vec<(f64, f64, usize)>,
    pub mean: f64,
    pub stdev: f64,
    pub max_abs: f64,
    /// Index `n` at which `max_abs` is attained.
    pub argmax: usize,
    pub solver_size: usize,
}

/// Equal-width bins over `[−m, m]` with `m = max |v|`; the last bin is closed.
pub fn bin_values(values: &[f64], bins: usize) -> Vec<(f64, f64, usize)> {
    let m = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let m = if m > 0.0 { m } else { 1.0 };
    let w = 2.0 * m / bins as f64;
    let mut counts = vec![0usize; bins];
    for v in values {
        let k = (((v + m) / w).floor() as isize).clamp(0, bins as isize - 1);
        counts[k as usize] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| (-m + k as f64 * w, -m + (k + 1) as f64 * w, c))
        .collect()
}

/// Values `n^{1/4} f_n(x₀)` for `n = 1..=n_max` from a single factorization.
pub fn histogram_values(x0: f64, n_max: usize, bins: usize) -> Result<Histogram> {
    if !(x0 >= 0.0 && x0.is_finite()) {
        return Err(Error::invalid(format!("x0 = {x0} must be finite and ≥ 0")));
    }
    if n_max < 1 || bins < 1 {
        return Err(Error::invalid(format!("need n_max ≥ 1 and bins ≥ 1, got {n_max} and {bins}")));
    }
    let solver = CollocationSolver::new(CollocationSolver::recommended_size(n_max, x0))?;
    let all = solver.eval_all(x0)?;
    let values: Vec<f64> = (1..=n_max).map(|n| (n as f64).powf(0.25) * all[n].value.re).collect();
    let len = values.len() as f64;
    let mean = values.iter().sum::<f64>() / len;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (len - 1.0).max(1.0);
    let (argmax, max_abs) = values
        .iter()
        .enumerate()
        .fold((1, 0.0f64), |(i, m), (k, v)| if v.abs() > m { (k + 1, v.abs()) } else { (i, m) });
    Ok(Histogram {
        x0,
        bins: bin_values(&values, bins),
        values,
        mean,
        stdev: var.sqrt(),
        max_abs,
        argmax,
        solver_size: solver.size(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_hold_every_value() {
        let v = [-2.0, -0.5, 0.0, 0.1, 2.0];
        let b = bin_values(&v, 4);
        assert_eq!(b.iter().map(|b| b.2).sum::<usize>(), 5);
        assert_eq!(b[0].0, -2.0);
        assert_eq!(b[3].1, 2.0);
        assert_eq!(b[3].2, 1);
    }
}
