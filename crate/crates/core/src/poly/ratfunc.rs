use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::polynomial::{gcd_cofactors, Polynomial};
use super::PolyError;
use crate::arith::BigRational;

/// A point of the projective line over ℚ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(BigRational),
    Infinity,
}

/// `num/den` in lowest terms with a monic denominator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RationalFunction {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (_, num, den) = gcd_cofactors(&num, &den)?;
        Ok(Self::with_monic_den(num, den))
    }

    /// Assumes `gcd(num, den) = 1`.
    fn with_monic_den(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let lead = den.leading().expect("nonzero denominator");
        if lead.is_one() {
            RationalFunction { num, den }
        } else {
            RationalFunction {
                num: num.scale(&lead.recip()),
                den: den.monic(),
            }
        }
    }

    /// Builds `num/den` when the caller already knows the pair is coprime.
    pub(crate) fn from_coprime(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        Self::with_monic_den(num, den)
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// `max(deg num, deg den)`; the zero function has degree 0.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    /// Order of vanishing at a point (negative at poles).
    ///
    /// # Panics
    /// Panics on the zero function, whose order is undefined.
    pub fn local_order(&self, point: &Point) -> i64 {
        assert!(!self.is_zero(), "local order of the zero function");
        match point {
            Point::Finite(x0) => {
                self.num.root_multiplicity(x0) as i64 - self.den.root_multiplicity(x0) as i64
            }
            Point::Infinity => self.den.degree().unwrap_or(0) as i64 - self.num.degree().unwrap_or(0) as i64,
        }
    }

    pub fn eval_at(&self, x: &BigRational) -> Result<BigRational, PolyError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(PolyError::Pole(x.clone()));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn square(&self) -> Self {
        RationalFunction {
            num: &self.num * &self.num,
            den: &self.den * &self.den,
        }
    }

    /// Substitution `x ↦ x + s`.
    pub fn shift(&self, s: &BigRational) -> Self {
        // Shifts preserve coprimality and monic leading coefficients.
        RationalFunction {
            num: self.num.shift(s),
            den: self.den.shift(s),
        }
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, PolyError> {
        Ok(self * &o.recip()?)
    }

    pub fn display_in(&self, var: &str) -> String {
        let n = self.num.display_in(var);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.display_in(var);
        let wrap = |s: String, p: &Polynomial| {
            if p.primitive().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RationalFunction::from_poly(&self.num + &o.num);
        }
        // Henrici: only gcd(b, d) and gcd(t, g) are needed.
        let (g, b1, d1) = gcd_cofactors(&self.den, &o.den).expect("nonzero denominators");
        if g.is_one() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            return RationalFunction::with_monic_den(num, &self.den * &o.den);
        }
        let t = &(&self.num * &d1) + &(&o.num * &b1);
        if t.is_zero() {
            return RationalFunction::zero();
        }
        let (g2, t1, g1) = gcd_cofactors(&t, &g).expect("nonzero");
        if g2.is_one() {
            RationalFunction::with_monic_den(t, &(&b1 * &d1) * &g)
        } else {
            RationalFunction::with_monic_den(t1, &(&b1 * &g1) * &d1)
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let (_, a, d) = gcd_cofactors(&self.num, &o.den).expect("nonzero");
        let (_, c, b) = gcd_cofactors(&o.num, &self.den).expect("nonzero");
        RationalFunction::with_monic_den(&a * &c, &b * &d)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// # Panics
    /// Panics when dividing by zero; use [`RationalFunction::try_div`].
    fn div(self, o: &RationalFunction) -> RationalFunction {
        self.try_div(o).expect("division by the zero function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<BigRational> for RationalFunction {
    fn from(c: BigRational) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}
