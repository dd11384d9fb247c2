//! Polynomial gcd over ℤ by multi-prime reduction (Brown's dense modular
//! algorithm). Results are certified by a coefficient bound, so they never
//! depend on a lucky choice of primes.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;

use super::intpoly::{self, IntPoly};
use super::modp::{self, word_primes, Zp};

/// Below this degree the subresultant sequence is cheaper than reduction.
const SMALL_DEGREE: usize = 6;

/// Primitive gcd (positive leading coefficient) of two nonzero primitive
/// integer polynomials.
pub fn modular_gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    modular_gcd_cofactors(a, b).0
}

/// `(g, a/g, b/g)` with `g` the primitive gcd of two nonzero primitive
/// integer polynomials.
///
/// With `γ = gcd(lc a, lc b)` the images of `G = γ·g/lc(g)`,
/// `A = lc(g)·(a/g)` and `B = lc(g)·(b/g)` are combined by CRT until the
/// modulus `M` exceeds twice every bound in play. Since `G·A ≡ γa` and
/// `G·B ≡ γb (mod M)` by construction, the bound turns the congruences
/// into identities over ℤ, so unlucky primes can never leak through.
pub fn modular_gcd_cofactors(a: &[BigInt], b: &[BigInt]) -> (IntPoly, IntPoly, IntPoly) {
    debug_assert!(!a.is_empty() && !b.is_empty());
    if a.len() == 1 || b.len() == 1 {
        return (vec![BigInt::one()], a.to_vec(), b.to_vec());
    }
    if a.len().min(b.len()) <= SMALL_DEGREE {
        return with_cofactors(a, b, intpoly::primitive_part(&intpoly::subresultant_gcd(a, b)));
    }
    let la = a.last().expect("nonempty");
    let lb = b.last().expect("nonempty");
    let gamma = la.gcd(lb);
    // Bits needed on the right-hand sides γa, γb.
    let rhs_bits = gamma.bits() + max_bits(a).max(max_bits(b));

    let mut best_deg = a.len().min(b.len()) - 1;
    let mut acc: Option<[Vec<BigInt>; 3]> = None;
    let mut modulus = BigUint::one();

    for &p in word_primes().iter() {
        let f = Zp::new(p);
        let gp = f.reduce_int(&gamma);
        if gp == 0 || f.reduce_int(la) == 0 || f.reduce_int(lb) == 0 {
            continue;
        }
        let ap: Vec<u64> = a.iter().map(|c| f.reduce_int(c)).collect();
        let bp: Vec<u64> = b.iter().map(|c| f.reduce_int(c)).collect();
        let g = modp::gcd(&f, &ap, &bp);
        let d = g.len() - 1;
        if d == 0 {
            return (vec![BigInt::one()], a.to_vec(), b.to_vec());
        }
        if d > best_deg {
            continue;
        }
        let gm = modp::scale(&f, &g, gp);
        let qa = modp::monic(&f, &modp::exact_quo(&f, &ap, &g));
        let qa = modp::scale(&f, &qa, f.reduce_int(la));
        let qb = modp::monic(&f, &modp::exact_quo(&f, &bp, &g));
        let qb = modp::scale(&f, &qb, f.reduce_int(lb));
        let images = [gm, qa, qb];
        match acc.as_mut() {
            Some(parts) if d == best_deg => {
                for (r, img) in parts.iter_mut().zip(&images) {
                    crt_combine(r, &modulus, img, p);
                }
                modulus *= BigUint::from(p);
            }
            _ => {
                best_deg = d;
                acc = Some(images.map(|img| img.iter().map(|&c| BigInt::from(c)).collect()));
                modulus = BigUint::from(p);
            }
        }
        let parts = acc.as_ref().expect("set above");
        let m = BigInt::from(modulus.clone());
        let half = &m >> 1;
        let sym = |v: &Vec<BigInt>| -> IntPoly {
            v.iter()
                .map(|r| if r > &half { r - &m } else { r.clone() })
                .collect()
        };
        let (gc, qa, qb) = (sym(&parts[0]), sym(&parts[1]), sym(&parts[2]));
        // ‖G·Q‖∞ ≤ ‖G‖∞·‖Q‖∞·(1 + min(deg G, deg Q)).
        let prod_bits = |q: &IntPoly| max_bits(&gc) + max_bits(q) + bits_of(1 + gc.len().min(q.len()) as u64);
        let need = rhs_bits.max(prod_bits(&qa)).max(prod_bits(&qb)) + 2;
        if modulus.bits() > need {
            let c = intpoly::content(&gc);
            let g = intpoly::primitive_part(&gc);
            let lg = g.last().expect("nonempty").clone();
            debug_assert_eq!(&c * &lg, gamma);
            let div = |q: IntPoly| -> IntPoly { q.into_iter().map(|x| x / &lg).collect() };
            return (g, div(qa), div(qb));
        }
    }
    // Out of primes: the subresultant sequence always terminates.
    with_cofactors(a, b, intpoly::primitive_part(&intpoly::subresultant_gcd(a, b)))
}

fn max_bits(p: &[BigInt]) -> u64 {
    p.iter().map(|c| c.bits()).max().unwrap_or(0)
}

fn bits_of(n: u64) -> u64 {
    64 - n.leading_zeros() as u64
}

fn with_cofactors(a: &[BigInt], b: &[BigInt], g: IntPoly) -> (IntPoly, IntPoly, IntPoly) {
    let qa = intpoly::exact_div(a, &g).expect("gcd divides its inputs");
    let qb = intpoly::exact_div(b, &g).expect("gcd divides its inputs");
    (g, qa, qb)
}

fn crt_combine(residues: &mut [BigInt], modulus: &BigUint, image: &[u64], p: u64) {
    let f = Zp::new(p);
    let m_mod_p = f.reduce_int(&BigInt::from(modulus.clone()));
    let inv = f.inv(m_mod_p);
    let m = BigInt::from(modulus.clone());
    for (r, &v) in residues.iter_mut().zip(image) {
        let rp = f.reduce_int(r);
        let t = f.mul(f.sub(v, rp), inv);
        *r += &m * BigInt::from(t);
    }
}
