//! Exact arithmetic in the Novikov ring `Λ` (finite sums with exponents in a
//! cyclic subgroup of `ℚ`), its fraction field, and truncated `u`-series.

mod elem;
mod frac;
mod parse;
mod ring;
mod series;

pub use elem::{ratio, NovikovElem};
pub use frac::Frac;
pub use parse::{parse_elem, parse_frac, parse_series, parse_upoly_elems};
pub use ring::{Coef, CoefficientRing, ExponentLattice, Setup};
pub use series::{Scalar, USeries};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NovikovError {
    #[error("lattice/ring mismatch: {left} vs {right}")]
    Mismatch { left: Setup, right: Setup },
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("derivative leaves coefficient ring: exponent {exponent} times coefficient {coefficient}")]
    DerivativeLeavesRing { exponent: String, coefficient: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("inverse requires field coefficients")]
    NonField,
    #[error("invalid exponent lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid coefficient ring: {0}")]
    InvalidRing(String),
    #[error("parse error: {0}")]
    Parse(String),
}
