//! Lehmer's gcd for large integers.
//!
//! `num-bigint` ships a binary (Stein) gcd, which is quadratic with a large
//! constant: one shift-and-subtract pass per bit or two. Lehmer's method
//! simulates a run of Euclidean steps on the leading 63 bits and applies
//! them in one linear pass, gaining about 30 bits per pass.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;

use super::BigRational;

/// Below this many limbs the library gcd is cheaper than the setup.
const SMALL_LIMBS: usize = 4;

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    let mut a = a.to_u64_digits();
    let mut b = b.to_u64_digits();
    while b.len() > SMALL_LIMBS {
        let shift = bits(&a) - 63;
        let mut x = window63(&a, shift) as i128;
        let mut y = window63(&b, shift) as i128;
        let (mut ca, mut cb, mut cc, mut cd) = (1i128, 0i128, 0i128, 1i128);
        // Knuth, Algorithm L: both quotient bounds must agree.
        while y + cc != 0 && y + cd != 0 {
            let q = (x + ca) / (y + cc);
            if q != (x + cb) / (y + cd) {
                break;
            }
            (ca, cc) = (cc, ca - q * cc);
            (cb, cd) = (cd, cb - q * cd);
            (x, y) = (y, x - q * y);
        }
        if cb == 0 {
            let r = from_limbs(&a) % from_limbs(&b);
            a = std::mem::replace(&mut b, r.to_u64_digits());
        } else {
            combine(&mut a, &mut b, [ca, cb, cc, cd]);
            if cmp_limbs(&a, &b).is_lt() {
                std::mem::swap(&mut a, &mut b);
            }
        }
    }
    from_limbs(&a).gcd(&from_limbs(&b))
}

fn bits(v: &[u64]) -> u64 {
    64 * v.len() as u64 - v.last().map_or(64, |w| w.leading_zeros() as u64)
}

/// The 63 bits of `v` starting at bit `shift` (zero-extended).
fn window63(v: &[u64], shift: u64) -> u64 {
    let (w, off) = ((shift / 64) as usize, shift % 64);
    let lo = v.get(w).copied().unwrap_or(0) >> off;
    let hi = if off == 0 {
        0
    } else {
        v.get(w + 1).copied().unwrap_or(0) << (64 - off)
    };
    (lo | hi) & (u64::MAX >> 1)
}

/// `(a, b) ← (ca·a + cb·b, cc·a + cd·b)` in one pass. Cofactors are below
/// 2^63 in magnitude and the results are nonnegative remainders, so `i128`
/// limb accumulators cannot overflow.
fn combine(a: &mut Vec<u64>, b: &mut Vec<u64>, [ca, cb, cc, cd]: [i128; 4]) {
    b.resize(a.len(), 0);
    let (mut c1, mut c2) = (0i128, 0i128);
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (u, v) = (*x as i128, *y as i128);
        let t1 = ca * u + cb * v + c1;
        let t2 = cc * u + cd * v + c2;
        *x = t1 as u64;
        *y = t2 as u64;
        c1 = t1 >> 64;
        c2 = t2 >> 64;
    }
    assert!(c1 == 0 && c2 == 0, "Lehmer step produced a negative remainder");
    for v in [a, b] {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
}

fn cmp_limbs(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

fn from_limbs(v: &[u64]) -> BigUint {
    let bytes: Vec<u8> = v.iter().flat_map(|w| w.to_le_bytes()).collect();
    BigUint::from_bytes_le(&bytes)
}

/// `num/den` in lowest terms with a positive denominator.
///
/// # Panics
/// Panics on a zero denominator.
pub fn reduced(num: BigInt, den: BigInt) -> BigRational {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return BigRational::from_integer(BigInt::zero());
    }
    let g = BigInt::from(gcd(num.magnitude(), den.magnitude()));
    let (mut n, mut d) = (num / &g, den / &g);
    if d.sign() == Sign::Minus {
        n = -n;
        d = -d;
    }
    BigRational::new_raw(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn matches_library_gcd() {
        let three = BigUint::from(3u32);
        let common = three.pow(200) + BigUint::one();
        for k in 1..6u32 {
            let a = &common * (BigUint::from(7u32).pow(150 * k) + BigUint::from(k));
            let b = &common * (BigUint::from(11u32).pow(120 * k) - BigUint::from(k));
            assert_eq!(gcd(&a, &b), a.gcd(&b));
            assert_eq!(gcd(&b, &a), a.gcd(&b));
        }
        let f = (1u32..400).fold(BigUint::one(), |acc, n| acc * n);
        assert_eq!(gcd(&f, &(&f + BigUint::one())), BigUint::one());
        assert_eq!(gcd(&f, &BigUint::zero()), f);
    }

    #[test]
    fn reduction() {
        let x = reduced(BigInt::from(-6), BigInt::from(-4));
        assert_eq!(x, BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(reduced(BigInt::from(0), BigInt::from(-4)), BigRational::zero());
    }
}
