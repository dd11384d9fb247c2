//! Orbit corpus shared by the lemma tests and the acceptance suite.
//!
//! Seeds are engineered so that one iterate is small at 2, 3, 5 and ∞ at
//! once: `s_k = 30^k / 7^{3k}` has `|s_k|_p = p^{-k}` for p = 2, 3, 5 and
//! `|s_k|_∞ = (30/343)^k`.

#![allow(dead_code)]

use dp1::arith::{BigRational, Place};
use dp1::height::{iterate_rationals, seeds_through, RationalOrbit};
use dp1::poly::CoefficientFamily;
use num_bigint::BigInt;

pub const PLACES: [Place; 4] = [Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Infinity];

/// Dyadic, so the finite-place comparisons are exact.
pub const DELTAS: [f64; 2] = [0.25, 0.125];

pub fn fam(a: &str, b: &str, c: &str) -> CoefficientFamily {
    CoefficientFamily::parse(a, b, c).unwrap()
}

pub fn small(k: u32) -> BigRational {
    BigRational::new(BigInt::from(30).pow(k), BigInt::from(343).pow(k))
}

pub fn one() -> BigRational {
    BigRational::from_integer(1.into())
}

pub struct Case {
    pub name: String,
    pub family: CoefficientFamily,
    pub orbit: RationalOrbit,
}

/// `a ≢ 0`: the orbit passes through `y_10 = s_k`, `y_11 = 1`, starting
/// four steps earlier and running four steps past.
pub fn blowup_corpus() -> Vec<Case> {
    let families = [
        ("1", "0", "1"),
        ("1", "j", "2"),
        ("2", "1", "j+1"),
        ("1/2", "3", "5"),
        ("j", "1", "-1"),
    ];
    let mut out = Vec::new();
    for (a, b, c) in families {
        for k in [12, 20] {
            let f = fam(a, b, c);
            let (r0, y0, y1) = seeds_through(&f, 10, small(k), one(), 4).unwrap();
            let orbit = iterate_rationals(&f, r0, y0, y1, 9).unwrap();
            out.push(Case {
                name: format!("a={a}, b={b}, c={c}, y_10=s_{k}"),
                family: f,
                orbit,
            });
        }
    }
    out
}

/// `a ≡ 0`, constant `c`: `y_5 = 1`, `y_6 = s_k`, eight steps forward.
pub fn confinement_corpus() -> Vec<Case> {
    let families = [
        ("0", "j", "1"),
        ("0", "2*j+1", "3"),
        ("0", "3", "-2"),
        ("0", "j/2-1", "1/5"),
        ("0", "j^2", "1"),
    ];
    confinement_cases(&families)
}

/// `a ≡ 0` with `c_{k+2} ≠ c_k`.
pub fn varying_c_corpus() -> Vec<Case> {
    confinement_cases(&[("0", "1", "j"), ("0", "j", "j^2+1"), ("0", "2", "2*j-1")])
}

fn confinement_cases(families: &[(&str, &str, &str)]) -> Vec<Case> {
    let mut out = Vec::new();
    for &(a, b, c) in families {
        for k in [12, 20] {
            let f = fam(a, b, c);
            let orbit = iterate_rationals(&f, 5, one(), small(k), 8).unwrap();
            out.push(Case {
                name: format!("a={a}, b={b}, c={c}, y_6=s_{k}"),
                family: f,
                orbit,
            });
        }
    }
    out
}
