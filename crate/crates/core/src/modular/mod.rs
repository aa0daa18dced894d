//! Theta-group machinery: exact q-series, fundamental-domain reduction and
//! pointwise evaluation of θ, λ, J, the kernel K and the forms g_n.

pub mod expansions;
pub mod group;
pub mod mp;
pub mod pointwise;
pub mod reduce;
pub mod series;

pub use expansions::{
    g_coefficients, g_cusp1_coefficients, g_cusp1_expansion, g_expansion, q_expansions, q_poly,
    QExpansions,
};
pub use group::{GroupElement, UpperHalfPoint};
pub use pointwise::{g_value, kernel_k, lambda_j, modular_values, theta, ModularValues};
pub use reduce::{reduce_to_fundamental, ReducedPoint};
pub use series::{Coeff, HalfIntSeries};
