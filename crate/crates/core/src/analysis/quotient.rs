//! `h_n(x) = f_n(x)/sin π(x − n)` on the real line, choosing the cheapest valid route.

use num_complex::Complex64;
use std::sync::{Arc, OnceLock};

use crate::basis::{
    h_phi_approx, h_quotient_laplace, laplace_terms, ApproxParams, CollocationSolver, EvalMethod,
};
use crate::error::{Error, Result};

/// Accept the Φ approximation when its error bound is below this.
const APPROX_ERR: f64 = 1e-12;
/// Accept the cusp-1 series when this many terms reach double precision.
const LAPLACE_TERMS: usize = 1024;

#[derive(Clone, Copy, Debug)]
pub struct HValue {
    pub x: f64,
    pub value: f64,
    pub err: f64,
    pub method: EvalMethod,
}

/// Evaluator for `h_n` on `[0, x_max]`; a collocation solver is built on first use.
pub struct QuotientEvaluator {
    n: usize,
    x_max: f64,
    params: ApproxParams,
    solver: OnceLock<Result<Arc<CollocationSolver>>>,
}

impl QuotientEvaluator {
    pub fn new(n: usize, x_max: f64) -> Self {
        QuotientEvaluator { n, x_max, params: ApproxParams::default(), solver: OnceLock::new() }
    }

    /// Reuse an existing solver (must cover `n` and `x_max`).
    pub fn with_solver(n: usize, solver: Arc<CollocationSolver>) -> Self {
        let x_max = solver.trusted_x();
        let cell = OnceLock::new();
        let _ = cell.set(Ok(solver));
        QuotientEvaluator { n, x_max, params: ApproxParams::default(), solver: cell }
    }

    fn solver(&self) -> Result<Arc<CollocationSolver>> {
        self.solver
            .get_or_init(|| {
                CollocationSolver::new(CollocationSolver::recommended_size(self.n, self.x_max)).map(Arc::new)
            })
            .as_ref()
            .map(Arc::clone)
            .map_err(|e| Error::invalid(format!("collocation solver unavailable: {e}")))
    }

    fn series_route(&self, x: f64) -> Option<HValue> {
        if self.n >= 1 {
            if let Ok((h, err)) = h_phi_approx(self.n, Complex64::new(x, 0.0), &self.params) {
                if err <= APPROX_ERR {
                    return Some(HValue { x, value: h.re, err, method: EvalMethod::PhiApprox });
                }
            }
        }
        if x > self.n as f64 && laplace_terms(self.n, x, 1e-17, usize::MAX) < LAPLACE_TERMS {
            if let Ok((h, err)) = h_quotient_laplace(self.n, x, 1e-17) {
                return Some(HValue { x, value: h, err, method: EvalMethod::Laplace });
            }
        }
        None
    }

    /// `h_n` at every point; points no route covers come back as errors.
    pub fn eval_many(&self, xs: &[f64]) -> Vec<Result<HValue>> {
        let mut out: Vec<Option<Result<HValue>>> = xs.iter().map(|&x| self.series_route(x).map(Ok)).collect();
        let pending: Vec<(usize, f64)> =
            xs.iter().enumerate().filter(|(i, _)| out[*i].is_none()).map(|(i, &x)| (i, x)).collect();
        if !pending.is_empty() {
            match self.solver() {
                Ok(s) => {
                    let (ok, gap): (Vec<_>, Vec<_>) =
                        pending.into_iter().partition(|&(_, x)| x >= 0.0 && x <= s.trusted_x());
                    for (i, x) in gap {
                        out[i] = Some(Err(Error::invalid(format!(
                            "x = {x} lies outside every evaluation route for n = {}",
                            self.n
                        ))));
                    }
                    let grid: Vec<f64> = ok.iter().map(|p| p.1).collect();
                    match s.h_values(self.n, &grid) {
                        Ok(vals) => {
                            for ((i, x), (v, e)) in ok.into_iter().zip(vals) {
                                out[i] = Some(Ok(HValue { x, value: v, err: e, method: EvalMethod::Collocation }));
                            }
                        }
                        Err(e) => {
                            let msg = e.to_string();
                            for (i, _) in ok {
                                out[i] = Some(Err(Error::invalid(msg.clone())));
                            }
                        }
                    }
                }
                Err(e) => {
                    let msg = e.to_string();
                    for (i, _) in pending {
                        out[i] = Some(Err(Error::invalid(msg.clone())));
                    }
                }
            }
        }
        out.into_iter().map(|v| v.expect("every point assigned")).collect()
    }

    pub fn eval(&self, x: f64) -> Result<HValue> {
        self.eval_many(&[x]).pop().expect("one point")
    }
}
