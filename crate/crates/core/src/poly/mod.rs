//! Univariate polynomials and rational functions over ℚ, the coefficient
//! family `a_j, b_j, c_j`, and the expression parser.

mod family;
pub mod gcd;
pub(crate) mod intpoly;
pub mod modp;
mod parse;
mod polynomial;
mod ratfunc;

use thiserror::Error;

use crate::arith::BigRational;

pub use family::{CoefficientFamily, CoefficientValues, FamilyText};
pub use parse::{parse_rational, parse_rational_function};
pub use polynomial::{gcd_cofactors, poly_gcd, poly_gcd_subresultant, Polynomial};
pub use ratfunc::{Point, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,
    #[error("pole at {0}")]
    Pole(BigRational),
    #[error("coefficient pole at index {0}")]
    CoefficientPole(i64),
    #[error("c must not vanish identically (c ≢ 0)")]
    ZeroC,
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}
