//! Theta multiplier system, Kloosterman sums at the two cusps and the
//! truncated Rademacher series for the coefficients of g_m.

pub mod multiplier;
pub mod rademacher;
pub mod sums;

pub use multiplier::{e, epsilon, kronecker, nu_theta, MultiplierValue};
pub use rademacher::{
    rademacher_a, rademacher_a_tilde, CoeffEntry, CoeffMethod, CoeffTable, CuspKind, SeriesValue,
};
pub use sums::{kloosterman_s, kloosterman_s_tilde, KloostermanCache};
