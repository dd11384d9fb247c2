//! Exact rationals, p-adic valuations, absolute values at every place of ℚ,
//! and logarithmic heights.
//!
//! Heights are available in two forms: the exact integer `max(|num|, den)`
//! ([`height_exact`]) and its natural logarithm ([`log_height`]). Identity
//! checks use the exact form; classifiers use the logarithm.

pub mod lehmer;
pub mod primes;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("height decomposition is undefined at 0")]
    ZeroValue,
    #[error("invalid place `{0}` (expected a prime or `inf`)")]
    BadPlace(String),
    #[error("prime factor {0} does not fit a machine word")]
    PrimeTooLarge(BigUint),
}

/// A place of ℚ: a finite prime or the archimedean place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl Place {
    pub fn prime(p: u64) -> Result<Self, ArithError> {
        if primes::is_prime_u64(p) {
            Ok(Place::Prime(p))
        } else {
            Err(ArithError::NotPrime(p))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    /// Natural log of the unit used by [`log_abs_units`]: `ln p`, or 1 at ∞.
    pub fn unit_ln(&self) -> f64 {
        match self {
            Place::Prime(p) => (*p as f64).ln(),
            Place::Infinity => 1.0,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Place {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "inf" | "infinity" | "∞" => Ok(Place::Infinity),
            _ => {
                let p: u64 = t.parse().map_err(|_| ArithError::BadPlace(t.to_string()))?;
                Place::prime(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// p-adic valuation; `Infinite` is the valuation of 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// Place-by-place split of the logarithmic height of a nonzero rational.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeightDecomposition {
    /// `log⁺|x|_v` for every place where it is nonzero.
    pub contributions: BTreeMap<Place, f64>,
    pub total: f64,
}

pub fn normalize(num: BigInt, den: BigInt) -> Result<BigRational, ArithError> {
    if den.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

/// Convenience constructor for small literals; panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> BigRational {
    normalize(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Natural logarithm of a positive big integer, correct to double precision.
pub fn ln_biguint(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("64 leading bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint_abs(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

/// `max(|num|, den)`, the exact height.
pub fn height_exact(x: &BigRational) -> BigUint {
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    num.max(den).clone()
}

/// `h(x) = log max(|num|, den)`; `h(0) = 0`.
pub fn log_height(x: &BigRational) -> f64 {
    ln_biguint(&height_exact(x))
}

fn valuation_of_int(n: &BigUint, p: u64) -> i64 {
    valuation_of_int_big(n, &BigUint::from(p))
}

fn valuation_of_int_big(n: &BigUint, bp: &BigUint) -> i64 {
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(bp);
        if !r.is_zero() {
            return v;
        }
        rest = q;
        v += 1;
    }
}

pub fn padic_valuation(x: &BigRational, p: u64) -> Result<Valuation, ArithError> {
    if !primes::is_prime_u64(p) {
        return Err(ArithError::NotPrime(p));
    }
    Ok(valuation_unchecked(x, p))
}

pub(crate) fn valuation_unchecked(x: &BigRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = valuation_of_int(x.numer().magnitude(), p);
    if num > 0 {
        return Valuation::Finite(num);
    }
    Valuation::Finite(-valuation_of_int(x.denom().magnitude(), p))
}

/// `|x|_v` as a float. Zero maps to 0 at every place.
pub fn abs_at_place(x: &BigRational, v: Place) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match v {
        Place::Prime(p) => {
            let r = valuation_unchecked(x, p).finite().expect("nonzero");
            (p as f64).powf(-(r as f64))
        }
        Place::Infinity => x.abs().to_f64().unwrap_or(f64::INFINITY),
    }
}

/// `log|x|_v` in place units: base-`p` logarithm (so the exact integer
/// `-v_p(x)`) at finite places, natural logarithm at ∞. `-∞` at zero.
pub fn log_abs_units(x: &BigRational, v: Place) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    match v {
        Place::Prime(p) => -(valuation_unchecked(x, p).finite().expect("nonzero") as f64),
        Place::Infinity => ln_bigint_abs(x.numer()) - ln_bigint_abs(x.denom()),
    }
}

/// Natural logarithm of `|x|_v` (`-∞` at zero).
pub fn log_abs(x: &BigRational, v: Place) -> f64 {
    log_abs_units(x, v) * v.unit_ln()
}

pub fn height_decomposition(x: &BigRational) -> Result<HeightDecomposition, ArithError> {
    if x.is_zero() {
        return Err(ArithError::ZeroValue);
    }
    let mut contributions = BTreeMap::new();
    // log⁺|x|_p > 0 exactly when p divides the denominator.
    let den = x.denom().magnitude();
    for (p, e) in primes::factorize(den) {
        let p = p.to_u64().ok_or(ArithError::PrimeTooLarge(p))?;
        contributions.insert(Place::Prime(p), e as f64 * (p as f64).ln());
    }
    let num = x.numer().magnitude();
    if num > den {
        contributions.insert(Place::Infinity, ln_biguint(num) - ln_biguint(den));
    }
    let total = contributions.values().sum::<f64>() + 0.0;
    Ok(HeightDecomposition { contributions, total })
}

/// Checks `|num| / den = Π_p p^{v_p(x)}` over the primes of `num·den`:
/// the product formula in exact integer form.
pub fn product_formula_holds(x: &BigRational) -> bool {
    if x.is_zero() {
        return false;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let mut up = BigUint::from(1u32);
    let mut down = BigUint::from(1u32);
    for (p, _) in primes::factorize(num).into_iter().chain(primes::factorize(den)) {
        let v = valuation_of_int_big(num, &p) - valuation_of_int_big(den, &p);
        if v > 0 {
            up *= p.pow(v as u32);
        } else if v < 0 {
            down *= p.pow((-v) as u32);
        }
    }
    &up == num && &down == den
}

/// Sign-aware helper used by the CLI and reports.
pub fn is_negative(x: &BigRational) -> bool {
    x.numer().sign() == Sign::Minus
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn normalize_examples() {
        let r = normalize(BigInt::from(6), BigInt::from(-4)).unwrap();
        assert_eq!(
            (r.numer().clone(), r.denom().clone()),
            (BigInt::from(-3), BigInt::from(2))
        );
        let z = normalize(BigInt::from(0), BigInt::from(7)).unwrap();
        assert_eq!(
            (z.numer().clone(), z.denom().clone()),
            (BigInt::from(0), BigInt::from(1))
        );
        assert_eq!(normalize(BigInt::from(-9), BigInt::from(-3)).unwrap(), int(3));
        assert_eq!(
            normalize(BigInt::from(1), BigInt::from(0)),
            Err(ArithError::ZeroDenominator)
        );
    }

    #[test]
    fn log_height_examples() {
        assert!(close(log_height(&rat(3, 2)), 3f64.ln()));
        assert_eq!(log_height(&int(0)), 0.0);
        assert!(close(log_height(&rat(-22, 7)), 22f64.ln()));
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_valuation(&int(12), 2), Ok(Valuation::Finite(2)));
        assert_eq!(padic_valuation(&rat(6, 5), 5), Ok(Valuation::Finite(-1)));
        assert_eq!(padic_valuation(&int(7), 3), Ok(Valuation::Finite(0)));
        assert_eq!(padic_valuation(&int(0), 3), Ok(Valuation::Infinite));
        assert_eq!(padic_valuation(&int(7), 4), Err(ArithError::NotPrime(4)));
    }

    #[test]
    fn absolute_values() {
        assert_eq!(abs_at_place(&int(12), Place::Prime(2)), 0.25);
        assert_eq!(abs_at_place(&rat(6, 5), Place::Prime(5)), 5.0);
        assert_eq!(abs_at_place(&rat(-3, 2), Place::Infinity), 1.5);
        assert_eq!(abs_at_place(&int(0), Place::Prime(3)), 0.0);
        assert_eq!(abs_at_place(&int(0), Place::Infinity), 0.0);
    }

    #[test]
    fn decomposition_examples() {
        let d = height_decomposition(&rat(6, 5)).unwrap();
        assert_eq!(d.contributions.len(), 2);
        assert!(close(d.contributions[&Place::Infinity], (6.0f64 / 5.0).ln()));
        assert!(close(d.contributions[&Place::Prime(5)], 5f64.ln()));
        assert!(close(d.total, 6f64.ln()));

        let one = height_decomposition(&int(1)).unwrap();
        assert!(one.contributions.is_empty());
        assert_eq!(one.total, 0.0);

        let d = height_decomposition(&rat(8, 3)).unwrap();
        assert!(close(d.contributions[&Place::Infinity], (8.0f64 / 3.0).ln()));
        assert!(close(d.contributions[&Place::Prime(3)], 3f64.ln()));
        assert!(close(d.total, 8f64.ln()));

        assert_eq!(height_decomposition(&int(0)), Err(ArithError::ZeroValue));
    }

    #[test]
    fn place_parsing() {
        assert_eq!("inf".parse::<Place>(), Ok(Place::Infinity));
        assert_eq!(" 7".parse::<Place>(), Ok(Place::Prime(7)));
        assert_eq!("9".parse::<Place>(), Err(ArithError::NotPrime(9)));
        assert!("x".parse::<Place>().is_err());
        assert!(Place::Prime(2) < Place::Infinity);
    }

    #[test]
    fn huge_logs() {
        let n = BigUint::from(3u32).pow(2000);
        assert!(close(ln_biguint(&n), 2000.0 * 3f64.ln()));
    }

    fn arb_rat() -> impl Strategy<Value = BigRational> {
        (-1_000_000i64..=1_000_000, 1i64..=1_000_000).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_nonzero() -> impl Strategy<Value = BigRational> {
        arb_rat().prop_filter("nonzero", |x| !x.is_zero())
    }

    proptest! {
        #[test]
        fn height_symmetric(x in arb_nonzero()) {
            prop_assert_eq!(height_exact(&x), height_exact(&x.recip()));
        }

        #[test]
        fn decomposition_sums_to_height(x in arb_nonzero()) {
            let d = height_decomposition(&x).unwrap();
            let s: f64 = d.contributions.values().sum();
            prop_assert!(close(s, d.total));
            prop_assert!(close(d.total, log_height(&x)));
            prop_assert!(product_formula_holds(&x));
        }

        #[test]
        fn strong_triangle(x in arb_rat(), y in arb_rat(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let s = &x + &y;
            let vx = valuation_unchecked(&x, p);
            let vy = valuation_unchecked(&y, p);
            let vs = valuation_unchecked(&s, p);
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }

        #[test]
        fn multiplicative(x in arb_nonzero(), y in arb_nonzero(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let vxy = valuation_unchecked(&(&x * &y), p).finite().unwrap();
            let vx = valuation_unchecked(&x, p).finite().unwrap();
            let vy = valuation_unchecked(&y, p).finite().unwrap();
            prop_assert_eq!(vxy, vx + vy);
            let a = abs_at_place(&(&x * &y), Place::Infinity);
            let b = abs_at_place(&x, Place::Infinity) * abs_at_place(&y, Place::Infinity);
            prop_assert!((a - b).abs() <= 1e-12 * b);
        }
    }
}
