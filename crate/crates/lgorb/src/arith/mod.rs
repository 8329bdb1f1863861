//! Exact arithmetic foundations: rationals, roots of unity, cyclotomic
//! numbers, multiplicative zeta-style products, and bigraded generating
//! functions.

pub mod cyclotomic;
pub mod efunction;
pub(crate) mod matrix;
pub mod phase;
pub mod zeta;

pub use cyclotomic::{
    cyclotomic_polynomial, divisors, euler_phi, moebius, CycloPoly, Cyclotomic, UnitRootSum,
};
pub use efunction::EFunction;
pub use phase::{lcm_u64, parse_rational, rat, rat_int, rational_string, Phase, Rational};
pub use zeta::ZetaProduct;
