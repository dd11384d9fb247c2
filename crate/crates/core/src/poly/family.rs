use serde::Serialize;

use super::parse::parse_rational_function;
use super::{PolyError, RationalFunction};
use crate::arith::{int, BigRational};

/// Values `(a_j, b_j, c_j)` at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientValues {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

/// Coefficients `a_j, b_j, c_j` of `y_{j+1} + y_{j-1} = (a_j y_j² + b_j y_j + c_j)/y_j²`
/// as rational functions of the index `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientFamily {
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub c: RationalFunction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyText {
    pub a: String,
    pub b: String,
    pub c: String,
}

impl CoefficientFamily {
    pub fn new(a: RationalFunction, b: RationalFunction, c: RationalFunction) -> Result<Self, PolyError> {
        if c.is_zero() {
            return Err(PolyError::ZeroC);
        }
        Ok(CoefficientFamily { a, b, c })
    }

    /// Parses three expressions in the index variable `j`.
    pub fn parse(a: &str, b: &str, c: &str) -> Result<Self, PolyError> {
        Self::new(
            parse_rational_function(a, "j")?,
            parse_rational_function(b, "j")?,
            parse_rational_function(c, "j")?,
        )
    }

    /// Family with constant coefficients.
    pub fn constants(a: BigRational, b: BigRational, c: BigRational) -> Result<Self, PolyError> {
        Self::new(a.into(), b.into(), c.into())
    }

    /// The discrete Painlevé I family `a = 0, b = A j + B, c = C`.
    pub fn dp1(a_lin: BigRational, b_const: BigRational, c: BigRational) -> Result<Self, PolyError> {
        let b = &RationalFunction::x().scale(&a_lin) + &RationalFunction::constant(b_const);
        Self::new(RationalFunction::zero(), b, c.into())
    }

    pub fn is_pole(&self, j: i64) -> bool {
        let x = int(j);
        [&self.a, &self.b, &self.c]
            .iter()
            .any(|f| f.den().eval(&x) == BigRational::from_integer(0.into()))
    }

    pub fn at(&self, j: i64) -> Result<CoefficientValues, PolyError> {
        let x = int(j);
        let pole = |e: PolyError| match e {
            PolyError::Pole(_) => PolyError::CoefficientPole(j),
            other => other,
        };
        Ok(CoefficientValues {
            a: self.a.eval_at(&x).map_err(pole)?,
            b: self.b.eval_at(&x).map_err(pole)?,
            c: self.c.eval_at(&x).map_err(pole)?,
        })
    }

    pub fn text(&self) -> FamilyText {
        FamilyText {
            a: self.a.display_in("j"),
            b: self.b.display_in("j"),
            c: self.c.display_in("j"),
        }
    }
}
