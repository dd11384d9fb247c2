//! Truncated Laurent series in a small parameter ε with coefficients in the
//! one-parameter field ℚ(κ).
//!
//! A series tracks the exponents `start .. start + window`. Everything below
//! `start` is known to vanish; everything from `start + window` on is
//! unknown. When the tracked coefficients are not all zero, the one at
//! `start` is nonzero and `start` is the valuation. A series whose tracked
//! coefficients all vanish is *zero to window*: its valuation is not
//! determined by the available precision.

use serde::Serialize;
use thiserror::Error;

use crate::arith::BigRational;
use crate::poly::RationalFunction;

/// Default number of tracked orders.
pub const DEFAULT_WINDOW: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("precision exhausted: no coefficient is determined")]
    PrecisionExhausted,
    #[error("series is zero through its window and cannot be inverted")]
    ZeroSeries,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedLaurent {
    start: i64,
    coeffs: Vec<RationalFunction>,
}

/// Value of a series as ε → 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Limit {
    Finite(RationalFunction),
    Infinite,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    Finite,
    Infinite,
    Indeterminate,
}

impl Limit {
    pub fn kind(&self) -> LimitKind {
        match self {
            Limit::Finite(_) => LimitKind::Finite,
            Limit::Infinite => LimitKind::Infinite,
            Limit::Indeterminate => LimitKind::Indeterminate,
        }
    }
}

impl TruncatedLaurent {
    /// Coefficients for exponents `start, start + 1, …`; leading zeros are
    /// shed (each one costs an order of precision).
    pub fn from_terms(start: i64, coeffs: Vec<RationalFunction>) -> Result<Self, LaurentError> {
        if coeffs.is_empty() {
            return Err(LaurentError::PrecisionExhausted);
        }
        Ok(Self::normalized(start, coeffs))
    }

    fn normalized(start: i64, coeffs: Vec<RationalFunction>) -> Self {
        match coeffs.iter().position(|c| !c.is_zero()) {
            None | Some(0) => TruncatedLaurent { start, coeffs },
            Some(k) => TruncatedLaurent {
                start: start + k as i64,
                coeffs: coeffs[k..].to_vec(),
            },
        }
    }

    pub fn constant(c: RationalFunction, window: usize) -> Self {
        Self::monomial(c, 0, window)
    }

    pub fn monomial(c: RationalFunction, exponent: i64, window: usize) -> Self {
        assert!(window >= 1, "window must be positive");
        let mut coeffs = vec![RationalFunction::zero(); window];
        coeffs[0] = c;
        TruncatedLaurent {
            start: exponent,
            coeffs,
        }
    }

    /// The series `ε` itself.
    pub fn epsilon(window: usize) -> Self {
        Self::monomial(RationalFunction::one(), 1, window)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn window(&self) -> usize {
        self.coeffs.len()
    }

    /// First exponent that is not determined.
    pub fn precision(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    pub fn is_zero_to_window(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero_to_window() {
            None
        } else {
            Some(self.start)
        }
    }

    /// Coefficient of `ε^k`, or `None` beyond the determined window.
    pub fn coeff(&self, k: i64) -> Option<RationalFunction> {
        if k < self.start {
            Some(RationalFunction::zero())
        } else if k < self.precision() {
            Some(self.coeffs[(k - self.start) as usize].clone())
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &RationalFunction)> {
        (self.start..).zip(self.coeffs.iter())
    }

    pub fn add(&self, o: &Self) -> Self {
        let lo = self.start.min(o.start);
        let hi = self.precision().min(o.precision());
        let coeffs = (lo..hi)
            .map(|k| {
                let a = self.coeff(k).expect("inside window");
                let b = o.coeff(k).expect("inside window");
                &a + &b
            })
            .collect();
        Self::normalized(lo, coeffs)
    }

    pub fn neg(&self) -> Self {
        TruncatedLaurent {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &RationalFunction) -> Self {
        Self::normalized(self.start, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn scale_rational(&self, s: &BigRational) -> Self {
        Self::normalized(self.start, self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let w = self.window().min(o.window());
        let start = self.start + o.start;
        if self.is_zero_to_window() || o.is_zero_to_window() {
            return TruncatedLaurent {
                start,
                coeffs: vec![RationalFunction::zero(); w],
            };
        }
        let coeffs = (0..w)
            .map(|n| {
                (0..=n).fold(RationalFunction::zero(), |acc, i| {
                    let (a, b) = (&self.coeffs[i], &o.coeffs[n - i]);
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        &acc + &(a * b)
                    }
                })
            })
            .collect();
        Self::normalized(start, coeffs)
    }

    /// Multiplicative inverse by the geometric-series recursion; the window
    /// is preserved and the valuation negated.
    pub fn invert(&self) -> Result<Self, LaurentError> {
        if self.is_zero_to_window() {
            return Err(LaurentError::ZeroSeries);
        }
        let w = self.window();
        let lead_inv = self.coeffs[0].recip().expect("leading coefficient is nonzero");
        let mut out: Vec<RationalFunction> = Vec::with_capacity(w);
        out.push(lead_inv.clone());
        for n in 1..w {
            let s = (1..=n).fold(RationalFunction::zero(), |acc, k| {
                let (a, b) = (&self.coeffs[k], &out[n - k]);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    &acc + &(a * b)
                }
            });
            out.push(-&(&s * &lead_inv));
        }
        Ok(TruncatedLaurent {
            start: -self.start,
            coeffs: out,
        })
    }

    pub fn limit_at_zero(&self) -> Limit {
        if self.is_zero_to_window() {
            return Limit::Indeterminate;
        }
        if self.start < 0 {
            Limit::Infinite
        } else if self.start == 0 {
            Limit::Finite(self.coeffs[0].clone())
        } else {
            Limit::Finite(RationalFunction::zero())
        }
    }

    /// Partial sum at `κ = kappa`, `ε = eps` over the tracked window.
    pub fn evaluate(&self, kappa: &BigRational, eps: &BigRational) -> Option<BigRational> {
        let mut acc = BigRational::from_integer(0.into());
        for (k, c) in self.terms() {
            let v = c.eval_at(kappa).ok()?;
            acc += v * pow_i(eps, k);
        }
        Some(acc)
    }

    /// Human-readable rendering with the parameter written `kappa`.
    pub fn display(&self) -> String {
        let mut parts: Vec<String> = self
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({})*eps^{}", c.display_in("kappa"), k))
            .collect();
        parts.push(format!("O(eps^{})", self.precision()));
        parts.join(" + ")
    }
}

fn pow_i(x: &BigRational, k: i64) -> BigRational {
    let base = if k < 0 { x.recip() } else { x.clone() };
    let mut acc = BigRational::from_integer(1.into());
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}
