//! Dense polynomials with `BigInt` coefficients (lowest degree first).
//!
//! These are the working representation behind [`super::Polynomial`]'s
//! multiplication and gcd: ℚ-polynomials are split into a rational content
//! and a primitive integer part, and the heavy lifting happens over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntPoly = Vec<BigInt>;

pub fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// gcd of all coefficients (0 for the zero polynomial).
pub fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part with positive leading coefficient.
pub fn primitive_part(p: &[BigInt]) -> IntPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut g = content(p);
    if p.last().expect("nonempty").is_negative() {
        g = -g;
    }
    if g.is_one() {
        return p.to_vec();
    }
    p.iter().map(|c| c / &g).collect()
}

const KARATSUBA_CUTOFF: usize = 32;

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = if a.len().min(b.len()) < KARATSUBA_CUTOFF {
        mul_schoolbook(a, b)
    } else {
        mul_karatsuba(a, b)
    };
    trim(&mut out);
    out
}

fn mul_schoolbook(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_into(dst: &mut [BigInt], src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

fn sum_halves(lo: &[BigInt], hi: &[BigInt]) -> IntPoly {
    let n = lo.len().max(hi.len());
    let mut out = vec![BigInt::zero(); n];
    add_into(&mut out, lo);
    add_into(&mut out, hi);
    out
}

fn mul_karatsuba(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    if a.len().min(b.len()) < KARATSUBA_CUTOFF {
        return mul_schoolbook(a, b);
    }
    let half = n / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    if a1.is_empty() || b1.is_empty() {
        return mul_schoolbook(a, b);
    }
    let z0 = mul_karatsuba(a0, b0);
    let z2 = mul_karatsuba(a1, b1);
    let mut z1 = mul_karatsuba(&sum_halves(a0, a1), &sum_halves(b0, b1));
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    add_into(&mut out, &z0);
    add_into(&mut out[half..], &z1);
    add_into(&mut out[2 * half..], &z2);
    out
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
pub fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    assert!(!b.is_empty(), "pseudo-division by zero");
    let mut r = a.to_vec();
    let lb = b.last().expect("nonempty");
    if r.len() < b.len() {
        return r;
    }
    let mut steps = r.len() - b.len() + 1;
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lr = r.last().expect("nonempty").clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &lr * c;
        }
        debug_assert!(r.last().expect("nonempty").is_zero());
        r.pop();
        trim(&mut r);
        steps -= 1;
    }
    if steps > 0 {
        let f = lb.pow(steps as u32);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Exact quotient `a / b` over ℤ, or `None` if `b` does not divide `a`.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let lb = b.last().expect("nonempty");
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let (t, rem) = r.last().expect("nonempty").div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &t * c;
        }
        q[shift] = t;
        trim(&mut r);
    }
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

/// gcd over ℤ by the subresultant polynomial remainder sequence.
/// Returns the primitive gcd with positive leading coefficient scaled by the
/// gcd of the contents.
pub fn subresultant_gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() {
        return primitive_with_content(b);
    }
    if b.is_empty() {
        return primitive_with_content(a);
    }
    let (mut a, mut b) = if a.len() >= b.len() {
        (a.to_vec(), b.to_vec())
    } else {
        (b.to_vec(), a.to_vec())
    };
    let d = content(&a).gcd(&content(&b));
    a = primitive_part(&a);
    b = primitive_part(&b);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![d];
        }
        let divisor = &g * h.pow(delta);
        a = b;
        b = r.into_iter().map(|c| c / &divisor).collect();
        g = a.last().expect("nonempty").clone();
        h = if delta == 0 {
            h
        } else {
            // h = g^delta / h^(delta-1), always exact.
            g.pow(delta) / h.pow(delta - 1)
        };
    }
    primitive_part(&b).into_iter().map(|c| c * &d).collect()
}

fn primitive_with_content(p: &[BigInt]) -> IntPoly {
    let c = content(p);
    primitive_part(p).into_iter().map(|x| x * &c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(v: &[i64]) -> IntPoly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let a: IntPoly = (0..97).map(|i| BigInt::from((i * 37 % 23) - 11)).collect();
        let b: IntPoly = (0..71).map(|i| BigInt::from((i * 53 % 19) - 9)).collect();
        let mut s = mul_schoolbook(&a, &b);
        trim(&mut s);
        assert_eq!(mul(&a, &b), s);
    }

    #[test]
    fn exact_division() {
        let f = mul(&ip(&[-1, 1]), &ip(&[1, 1, 3]));
        assert_eq!(exact_div(&f, &ip(&[-1, 1])), Some(ip(&[1, 1, 3])));
        assert_eq!(exact_div(&f, &ip(&[1, 2])), None);
    }

    #[test]
    fn subresultant_known() {
        // (x^2 - 1, x^2 - 2x + 1) -> x - 1
        assert_eq!(subresultant_gcd(&ip(&[-1, 0, 1]), &ip(&[1, -2, 1])), ip(&[-1, 1]));
        // Knuth's classic example has gcd 1.
        let a = ip(&[-5, 2, 8, -3, -3, 0, 1, 0, 1]);
        let b = ip(&[21, -9, -4, 0, 5, 0, 3]);
        assert_eq!(subresultant_gcd(&a, &b), ip(&[1]));
    }
}
