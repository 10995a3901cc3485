//! Exact computation of the algebraic entropy of birational self-maps of
//! projective space.
//!
//! The crate iterates a map on the generic point (or on a random line over a
//! prime field), records the degree sequence of the reduced iterates, and
//! extracts the entropy three ways: ratio tables, exact rational
//! generating-function fits, and the derived multiplicative recurrence of the
//! stabilized factor structure of the iterates.

pub mod dense2;
pub mod gcd;
pub mod map;
pub mod mono;
pub mod ntt;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod seq;
pub mod uni;

pub use mono::Monomial;
pub use parse::{parse_polynomial, SyntaxError};
pub use poly::{varset, PolyError, Polynomial};
pub use ring::{Coef, CoefficientRing, DEFAULT_PRIME};
