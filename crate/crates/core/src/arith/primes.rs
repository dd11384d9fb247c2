//! Primality testing and integer factorization for place decompositions.
//!
//! Word-sized inputs use deterministic Miller-Rabin; larger inputs are
//! split with trial division followed by Brent's variant of Pollard rho.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for all `u64` (the first twelve primes form a complete witness set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the twelve smallest prime bases. Deterministic below
/// 3.3e24 and overwhelmingly reliable above.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Brent's cycle-finding Pollard rho on a composite odd `n`.
fn rho_u64(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut g = 1u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint, c: &BigUint| (x * x + c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        let mut q = BigUint::one();
        let mut ys = y.clone();
        let mut r = 1u64;
        let m = 64u64;
        while d.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y, &c);
            }
            let mut k = 0;
            while k < r && d.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y, &c);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                d = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &d == n {
            loop {
                ys = f(&ys, &c);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                d = diff.gcd(n);
                if !d.is_one() {
                    break;
                }
            }
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// `(r, k)` with `r^k = n` and `k ≥ 2` maximal, if `n` is a perfect power.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    (2..=bits).rev().find_map(|k| {
        let r = n.nth_root(k);
        (r.pow(k) == *n && r > BigUint::one()).then_some((r, k))
    })
}

fn split_into(n: BigUint, out: &mut BTreeMap<BigUint, u32>) {
    if n.is_one() {
        return;
    }
    // Rho is hopeless on p^k with large p; strip perfect powers first.
    if let Some((r, k)) = perfect_power(&n) {
        let mut inner = BTreeMap::new();
        split_into(r, &mut inner);
        for (p, e) in inner {
            *out.entry(p).or_insert(0) += e * k;
        }
        return;
    }
    if let Some(small) = n.to_u64() {
        if is_prime_u64(small) {
            *out.entry(n).or_insert(0) += 1;
            return;
        }
        let d = rho_u64(small);
        split_into(BigUint::from(d), out);
        split_into(BigUint::from(small / d), out);
        return;
    }
    if is_prime_big(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = rho_big(&n);
    let rest = &n / &d;
    split_into(d, out);
    split_into(rest, out);
}

/// Prime factorization `n = Π p^e`; `factorize(1)` is empty.
///
/// # Panics
/// Panics on `n = 0`.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, u32> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut out = BTreeMap::new();
    let mut rest = n.clone();
    for p in 2u32..1000 {
        if p > 2 && p % 2 == 0 {
            continue;
        }
        let bp = BigUint::from(p);
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            out.insert(bp, e);
        }
        if rest.is_one() {
            return out;
        }
    }
    split_into(rest, &mut out);
    out
}
