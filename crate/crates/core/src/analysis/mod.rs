//! Zeros, second moments, value distributions and the interpolation check.

pub mod histogram;
pub mod interp;
pub mod moments;
pub mod quotient;
pub mod zeros;

pub use histogram::{bin_values, histogram_values, Histogram};
pub use interp::{gaussian_pair, verify_interpolation, InterpReport};
pub use moments::{
    default_cut, integrate_squares, l2_sum, moment_fn, moment_fn_with_width, moments_to_cut, tail_estimate, L2Sum,
    MomentResult, Target,
};
pub use quotient::{HValue, QuotientEvaluator};
pub use zeros::{count_zeros_delta, count_zeros_rectangle, real_zeros, Window, ZeroReport};
