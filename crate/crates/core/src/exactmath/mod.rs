//! Exact rational arithmetic, dense univariate polynomials and sparse
//! multivariate polynomials with layer-by-layer definite integration.
//!
//! Everything here is exact. Values are canonicalized after every operation:
//! rationals are reduced with a positive denominator, univariate polynomials
//! carry no trailing zero coefficient and multivariate polynomials store no
//! zero monomial.

pub(crate) mod multi;
mod poly;
mod rational;

pub use multi::{Bound, MultiPoly};
pub use poly::Polynomial;
pub use rational::{format_rational, parse_rational, rational_to_f64, Rational};

/// `∫₀¹ p(z) dz`.
pub fn definite_unit_integral(p: &Polynomial) -> Rational {
    p.unit_integral()
}
