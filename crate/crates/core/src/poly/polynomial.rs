use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gcd::modular_gcd_cofactors;
use super::intpoly::{self, IntPoly};
use super::PolyError;
use crate::arith::BigRational;

/// Dense univariate polynomial over ℚ, stored as `content · primitive` with
/// an integer primitive part whose leading coefficient is positive. The
/// content carries the sign; zero is content 0 with an empty primitive part.
/// The split is unique, so equality is componentwise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    content: BigRational,
    prim: IntPoly,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            content: BigRational::zero(),
            prim: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            content: c,
            prim: vec![BigInt::one()],
        }
    }

    /// The variable itself.
    pub fn x() -> Self {
        Polynomial {
            content: BigRational::one(),
            prim: vec![BigInt::zero(), BigInt::one()],
        }
    }

    /// Coefficients lowest degree first; trailing zeros are dropped.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut den = BigInt::one();
        for c in &coeffs {
            if !c.denom().is_one() {
                den = den.lcm(c.denom());
            }
        }
        let scaled: IntPoly = coeffs
            .iter()
            .map(|c| {
                if den.is_one() {
                    c.numer().clone()
                } else {
                    c.numer() * (&den / c.denom())
                }
            })
            .collect();
        Self::from_int(scaled).scale(&BigRational::from_integer(den).recip())
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_int(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub(crate) fn from_int(mut coeffs: IntPoly) -> Self {
        intpoly::trim(&mut coeffs);
        if coeffs.is_empty() {
            return Self::zero();
        }
        let mut g = intpoly::content(&coeffs);
        if coeffs.last().expect("nonempty").is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in coeffs.iter_mut() {
                *c = &*c / &g;
            }
        }
        Polynomial {
            content: BigRational::from_integer(g),
            prim: coeffs,
        }
    }

    /// `content · prim` for a primitive `prim` with positive leading
    /// coefficient.
    fn from_parts(content: BigRational, prim: IntPoly) -> Self {
        debug_assert!(prim.last().is_none_or(|c| c.is_positive()));
        if content.is_zero() || prim.is_empty() {
            return Self::zero();
        }
        Polynomial { content, prim }
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.prim
            .iter()
            .map(|c| &self.content * BigRational::from_integer(c.clone()))
            .collect()
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        match self.prim.get(k) {
            Some(c) => &self.content * BigRational::from_integer(c.clone()),
            None => BigRational::zero(),
        }
    }

    /// Number of stored coefficients (`degree + 1`, or 0 for zero).
    pub fn len(&self) -> usize {
        self.prim.len()
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.prim.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.prim.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.prim.len() == 1 && self.content.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.prim.len() <= 1
    }

    pub fn leading(&self) -> Option<BigRational> {
        self.prim
            .last()
            .map(|c| &self.content * BigRational::from_integer(c.clone()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_parts(&self.content * s, self.prim.clone())
    }

    pub fn monic(&self) -> Self {
        match self.prim.last() {
            None => Self::zero(),
            Some(l) => Self::from_parts(BigRational::from_integer(l.clone()).recip(), self.prim.clone()),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        // Homogenised Horner over ℤ: Σ p_i u^i v^(n-i), then one division.
        let (u, v) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut vpow = BigInt::one();
        for c in self.prim.iter().rev() {
            acc = acc * u + c * &vpow;
            vpow *= v;
        }
        let vn = vpow / v;
        &self.content * BigRational::new(acc, vn)
    }

    pub(crate) fn content(&self) -> &BigRational {
        &self.content
    }

    pub(crate) fn primitive(&self) -> &[BigInt] {
        &self.prim
    }

    pub fn divmod(&self, g: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let gc = g.coeffs();
        let dg = gc.len();
        if self.len() < dg {
            return Ok((Self::zero(), self.clone()));
        }
        let inv = gc.last().expect("nonzero").recip();
        let mut r = self.coeffs();
        let mut q = vec![BigRational::zero(); r.len() - dg + 1];
        while r.len() >= dg {
            let shift = r.len() - dg;
            let t = r.last().expect("nonempty") * &inv;
            for (i, c) in gc.iter().enumerate() {
                r[shift + i] -= &t * c;
            }
            q[shift] = t;
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    /// Substitution `x ↦ x + s` (Taylor shift).
    pub fn shift(&self, s: &BigRational) -> Polynomial {
        let step = Polynomial::from_coeffs(vec![s.clone(), BigRational::one()]);
        let mut acc = Polynomial::zero();
        for c in self.coeffs().into_iter().rev() {
            acc = &(&acc * &step) + &Polynomial::constant(c);
        }
        acc
    }

    /// Multiplicity of `x0` as a root.
    pub fn root_multiplicity(&self, x0: &BigRational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        if x0.is_zero() {
            return self.prim.iter().take_while(|c| c.is_zero()).count();
        }
        // Divide by the primitive linear factor v·x - u over ℤ.
        let factor = vec![-x0.numer().clone(), x0.denom().clone()];
        let mut k = 0;
        let mut cur = self.prim.clone();
        while let Some(q) = intpoly::exact_div(&cur, &factor) {
            cur = q;
            k += 1;
        }
        k
    }
}

/// Monic greatest common divisor over ℚ.
pub fn poly_gcd(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
    Ok(gcd_cofactors(f, g)?.0)
}

/// `(gcd, f/gcd, g/gcd)` with a monic gcd.
pub fn gcd_cofactors(
    f: &Polynomial,
    g: &Polynomial,
) -> Result<(Polynomial, Polynomial, Polynomial), PolyError> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => Err(PolyError::ZeroGcd),
        (true, false) => Ok((
            g.monic(),
            Polynomial::zero(),
            Polynomial::constant(g.leading().expect("nonzero")),
        )),
        (false, true) => Ok((
            f.monic(),
            Polynomial::constant(f.leading().expect("nonzero")),
            Polynomial::zero(),
        )),
        (false, false) => {
            let (h, qf, qg) = modular_gcd_cofactors(&f.prim, &g.prim);
            let lead = BigRational::from_integer(h.last().expect("nonzero").clone());
            let gcd = Polynomial::from_parts(lead.recip(), h);
            Ok((
                gcd,
                Polynomial::from_parts(&f.content * &lead, qf),
                Polynomial::from_parts(&g.content * &lead, qg),
            ))
        }
    }
}

/// Monic gcd by the subresultant remainder sequence alone. Slower than
/// [`poly_gcd`] on large inputs; kept as an independent reference.
pub fn poly_gcd_subresultant(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::ZeroGcd);
    }
    Ok(Polynomial::from_int(intpoly::subresultant_gcd(&f.prim, &g.prim)).monic())
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        // c1 p1 + c2 p2 = (g/l)·((n1/g)(l/d1) p1 + (n2/g)(l/d2) p2)
        let (n1, d1) = (self.content.numer(), self.content.denom());
        let (n2, d2) = (o.content.numer(), o.content.denom());
        let g = n1.gcd(n2);
        let l = d1.lcm(d2);
        let m1 = (n1 / &g) * (&l / d1);
        let m2 = (n2 / &g) * (&l / d2);
        let n = self.prim.len().max(o.prim.len());
        let mut sum: IntPoly = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = BigInt::zero();
            if let Some(a) = self.prim.get(i) {
                c += a * &m1;
            }
            if let Some(b) = o.prim.get(i) {
                c += b * &m2;
            }
            sum.push(c);
        }
        Polynomial::from_int(sum).scale(&BigRational::new(g, l))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self + &(-o)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            content: -&self.content,
            prim: self.prim.clone(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        // Gauss: the product of primitive polynomials is primitive.
        Polynomial::from_parts(&self.content * &o.content, intpoly::mul(&self.prim, &o.prim))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, o: Polynomial) -> Polynomial {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Polynomial {
    /// Renders with the given variable name, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match k {
                0 => out.push_str(&coeff),
                _ => {
                    if !mag.is_one() {
                        if mag.is_integer() {
                            out.push_str(&coeff);
                        } else {
                            out.push_str(&format!("({coeff})"));
                        }
                        out.push('*');
                    }
                    out.push_str(var);
                    if k > 1 {
                        out.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}
