//! Polynomials and rational functions over a word-sized prime field.
//!
//! Used for modular gcd and for the degree-only fast path.

use num_bigint::{BigInt, Sign};
use std::sync::OnceLock;

use crate::arith::primes::is_prime_u64;
use crate::arith::BigRational;

/// Prime field `ℤ/pℤ` with `p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Zp {
    pub p: u64,
}

impl Zp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < (1 << 62) && is_prime_u64(p));
        Zp { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Precomputed quotient `⌊w·2^64/p⌋` for repeated products with `w`.
    #[inline]
    pub fn shoup(&self, w: u64) -> u64 {
        (((w as u128) << 64) / self.p as u128) as u64
    }

    /// `x·w mod p` given `ws = self.shoup(w)`, without a wide division.
    #[inline]
    pub fn mul_shoup(&self, x: u64, w: u64, ws: u64) -> u64 {
        let q = ((x as u128 * ws as u128) >> 64) as u64;
        let r = x.wrapping_mul(w).wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = self.p as u128;
        let r = n
            .magnitude()
            .iter_u64_digits()
            .rev()
            .fold(0u128, |acc, d| ((acc << 64) | d as u128) % p) as u64;
        if n.sign() == Sign::Minus {
            self.sub(0, r)
        } else {
            r
        }
    }

    /// `None` when `p` divides the denominator.
    pub fn reduce_rat(&self, x: &BigRational) -> Option<u64> {
        let d = self.reduce_int(x.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.reduce_int(x.numer()), self.inv(d)))
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn lift(&self, a: u64) -> BigInt {
        if a > self.p / 2 {
            BigInt::from(a) - BigInt::from(self.p)
        } else {
            BigInt::from(a)
        }
    }
}

/// Descending primes below `2^62`, generated once.
pub fn word_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(256);
        let mut n = (1u64 << 62) - 1;
        while out.len() < 256 {
            if is_prime_u64(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

pub type PolyP = Vec<u64>;

pub fn trim(p: &mut PolyP) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn add(f: &Zp, a: &[u64], b: &[u64]) -> PolyP {
    let n = a.len().max(b.len());
    let mut out: PolyP = (0..n)
        .map(|i| f.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &Zp, a: &[u64], b: &[u64]) -> PolyP {
    let n = a.len().max(b.len());
    let mut out: PolyP = (0..n)
        .map(|i| f.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut out);
    out
}

pub fn scale(f: &Zp, a: &[u64], s: u64) -> PolyP {
    if s == 0 {
        return Vec::new();
    }
    let ss = f.shoup(s);
    a.iter().map(|&c| f.mul_shoup(c, s, ss)).collect()
}

pub fn mul(f: &Zp, a: &[u64], b: &[u64]) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Accumulate in u128 and reduce lazily; each product is < 2^124.
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let p = f.p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let slot = &mut acc[i + j];
            *slot += x as u128 * y as u128;
            if *slot >= 1u128 << 126 {
                *slot %= p;
            }
        }
    }
    let mut out: PolyP = acc.into_iter().map(|c| (c % p) as u64).collect();
    trim(&mut out);
    out
}

pub fn divmod(f: &Zp, a: &[u64], b: &[u64]) -> (PolyP, PolyP) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let inv = f.inv(*b.last().expect("nonempty"));
    let mut r = a.to_vec();
    let mut q = vec![0; a.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let t = f.mul(*r.last().expect("nonempty"), inv);
        let ts = f.shoup(t);
        for (ri, &c) in r[shift..].iter_mut().zip(b) {
            *ri = f.sub(*ri, f.mul_shoup(c, t, ts));
        }
        q[shift] = t;
        trim(&mut r);
    }
    (q, r)
}

pub fn monic(f: &Zp, a: &[u64]) -> PolyP {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(f, a, f.inv(l)),
    }
}

/// Monic gcd by the Euclidean algorithm.
pub fn gcd(f: &Zp, a: &[u64], b: &[u64]) -> PolyP {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divmod(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn exact_quo(f: &Zp, a: &[u64], b: &[u64]) -> PolyP {
    let (q, r) = divmod(f, a, b);
    debug_assert!(r.is_empty());
    q
}

/// Reduced fraction `num/den` over `F_p` with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFnP {
    pub num: PolyP,
    pub den: PolyP,
}

impl RatFnP {
    pub fn new(f: &Zp, num: PolyP, den: PolyP) -> Self {
        assert!(!den.is_empty(), "zero denominator mod p");
        let g = gcd(f, &num, &den);
        let (mut num, mut den) = if g.len() > 1 {
            (exact_quo(f, &num, &g), exact_quo(f, &den, &g))
        } else {
            (num, den)
        };
        trim(&mut num);
        let l = f.inv(*den.last().expect("nonempty"));
        num = scale(f, &num, l);
        den = scale(f, &den, l);
        RatFnP { num, den }
    }

    pub fn constant(c: u64) -> Self {
        RatFnP {
            num: if c == 0 { Vec::new() } else { vec![c] },
            den: vec![1],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.num.len().max(self.den.len()).saturating_sub(1)
    }

    /// Already reduced `num/den`; only the denominator is made monic.
    pub fn from_coprime(f: &Zp, num: PolyP, den: PolyP) -> Self {
        let l = f.inv(*den.last().expect("nonzero denominator"));
        RatFnP {
            num: scale(f, &num, l),
            den: scale(f, &den, l),
        }
    }

    pub fn add(&self, f: &Zp, o: &Self) -> Self {
        // Henrici: only the common part of the denominators can cancel.
        let g = gcd(f, &self.den, &o.den);
        if g.len() == 1 {
            let num = add(f, &mul(f, &self.num, &o.den), &mul(f, &o.num, &self.den));
            return RatFnP::from_coprime(f, num, mul(f, &self.den, &o.den));
        }
        let d1 = exact_quo(f, &self.den, &g);
        let d2 = exact_quo(f, &o.den, &g);
        let t = add(f, &mul(f, &self.num, &d2), &mul(f, &o.num, &d1));
        if t.is_empty() {
            return RatFnP::constant(0);
        }
        let g2 = gcd(f, &t, &g);
        let (t, g) = if g2.len() > 1 {
            (exact_quo(f, &t, &g2), exact_quo(f, &g, &g2))
        } else {
            (t, g)
        };
        RatFnP::from_coprime(f, t, mul(f, &mul(f, &d1, &d2), &g))
    }

    pub fn neg(&self, f: &Zp) -> Self {
        RatFnP {
            num: self.num.iter().map(|&c| f.sub(0, c)).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, f: &Zp, o: &Self) -> Self {
        self.add(f, &o.neg(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shoup_matches_wide_product() {
        let f = Zp::new(word_primes()[3]);
        let mut x = 0x9e37_79b9_7f4a_7c15u64 % f.p;
        for _ in 0..1000 {
            let w = x.rotate_left(17) % f.p;
            assert_eq!(f.mul_shoup(x, w, f.shoup(w)), f.mul(x, w));
            x = f.mul(x, x) ^ 0x5555;
            x %= f.p;
        }
        assert_eq!(f.mul_shoup(f.p - 1, f.p - 1, f.shoup(f.p - 1)), 1);
    }

    #[test]
    fn field_ops() {
        let f = Zp::new(word_primes()[0]);
        let a = 123_456_789_012_345u64;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        assert_eq!(f.reduce_int(&BigInt::from(-1)), f.p - 1);
        assert_eq!(f.lift(f.p - 3), BigInt::from(-3));
    }

    #[test]
    fn gcd_mod_p() {
        let f = Zp::new(101);
        // (x-1)(x+2) and (x-1)(x+5)
        let a = mul(&f, &[100, 1], &[2, 1]);
        let b = mul(&f, &[100, 1], &[5, 1]);
        assert_eq!(gcd(&f, &a, &b), vec![100, 1]);
    }

    #[test]
    fn primes_descend() {
        let ps = word_primes();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p < 1 << 62 && is_prime_u64(p)));
    }
}
