//! Evaluation of the basis functions `f_n`: collocation, contour quadrature,
//! the Laplace-type series at the cusp 1, and the Φ approximation.

pub mod approx;
pub mod collocation;
pub mod contour;
pub mod generating;
pub mod laplace;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use approx::{eval_phi_approx, h_phi_approx, phi_regular, ApproxParams};
pub use collocation::{CollocationSolver, SolverMeta, MAX_CONDITION};
pub use contour::{eval_contour, ContourConfig, ContourEvaluator};
pub use generating::{generating_f, generating_f_kernel, GeneratingValue};
pub use laplace::{eval_laplace, h_laplace, h_quotient_laplace, laplace_terms, CuspCoefficients};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMethod {
    Collocation,
    Contour,
    Laplace,
    PhiApprox,
}

impl EvalMethod {
    pub fn name(self) -> &'static str {
        match self {
            EvalMethod::Collocation => "collocation",
            EvalMethod::Contour => "contour",
            EvalMethod::Laplace => "laplace",
            EvalMethod::PhiApprox => "phi_approx",
        }
    }
}

impl std::str::FromStr for EvalMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "collocation" => Ok(EvalMethod::Collocation),
            "contour" => Ok(EvalMethod::Contour),
            "laplace" => Ok(EvalMethod::Laplace),
            "phi" | "phi_approx" => Ok(EvalMethod::PhiApprox),
            other => Err(crate::Error::invalid(format!("unknown method {other:?}"))),
        }
    }
}

/// One value of `f_n` with the route used and a heuristic error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub n: usize,
    pub x: Complex64,
    pub value: Complex64,
    pub method: EvalMethod,
    pub err: f64,
}

impl EvalResult {
    /// Real part, the value of `f_n` for real `x`.
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// Distance from `x` to the nearest integer.
pub(crate) fn integer_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}
