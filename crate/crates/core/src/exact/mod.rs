//! Exact and certified scalar arithmetic.

mod ball;
mod cf;
mod laurent;
mod rational;

pub use ball::{Ball, BallSerde};
pub use cf::{cf_expand, ContinuedFractionReport};
pub use laurent::{laurent_det_tridiagonal, LaurentPoly};
pub use rational::{
    format_rational, parse_rational, pow_int, rat, rational_serde, rational_to_decimal, to_f64,
    Rational,
};
