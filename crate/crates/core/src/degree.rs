//! Iteration over the function field ℚ(z): degrees, cumulative degrees,
//! entropy estimates and local zero/pole orders.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::arith::BigRational;
use crate::fit::{linear_fit, quadratic_fit, QuadraticFit};
use crate::poly::modp::{self, word_primes, PolyP, RatFnP, Zp};
use crate::poly::{CoefficientFamily, CoefficientValues, Point, PolyError, Polynomial, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("iterate y_{index} vanishes identically; the next step is undefined")]
    SingularOrbit { index: i64 },
    #[error("degenerate entropy window: {0}")]
    DegenerateWindow(String),
    #[error("no pair of word-sized primes gave consistent degrees")]
    NoGoodPrimes,
}

/// `y_{s}, y_{s+1}, …` over ℚ(z) with their degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldOrbit {
    pub start_index: i64,
    pub iterates: Vec<RationalFunction>,
    pub degrees: Vec<usize>,
}

impl FieldOrbit {
    pub fn index(&self, i: usize) -> i64 {
        self.start_index + i as i64
    }

    pub fn last_index(&self) -> i64 {
        self.index(self.iterates.len().saturating_sub(1))
    }
}

/// Right-hand side `(a y² + b y + c)/y²` for nonzero `y`.
///
/// With `y = N/D` in lowest terms and `c ≠ 0`, `aN² + bND + cD²` is coprime
/// to `N`, so the quotient by `N²` is already reduced.
fn rhs(v: &CoefficientValues, y: &RationalFunction) -> RationalFunction {
    let (n, d) = (y.num(), y.den());
    let nn = n * n;
    let mut f = d * d;
    f = f.scale(&v.c);
    if !v.b.is_zero() {
        f = &f + &(n * d).scale(&v.b);
    }
    if !v.a.is_zero() {
        f = &f + &nn.scale(&v.a);
    }
    if v.c.is_zero() {
        RationalFunction::new(f, nn).expect("nonzero denominator")
    } else {
        RationalFunction::from_coprime(f, nn)
    }
}

/// `count` steps of the recurrence from `y_start = y0`, `y_{start+1} = y1`;
/// the step producing `y_{j+1}` uses the coefficients at `j`.
pub fn iterate_field(
    fam: &CoefficientFamily,
    start: i64,
    y0: RationalFunction,
    y1: RationalFunction,
    count: usize,
) -> Result<FieldOrbit, DegreeError> {
    let mut iterates = vec![y0, y1];
    for step in 0..count {
        let j = start + 1 + step as i64;
        let y = &iterates[iterates.len() - 1];
        if y.is_zero() {
            return Err(DegreeError::SingularOrbit { index: j });
        }
        let v = fam.at(j)?;
        let next = &rhs(&v, y) - &iterates[iterates.len() - 2];
        iterates.push(next);
    }
    let degrees = iterates.iter().map(|y| y.degree()).collect();
    Ok(FieldOrbit {
        start_index: start,
        iterates,
        degrees,
    })
}

/// Recomputes every step with plain field operations and checks
/// `y_{j+1} + y_{j-1} = (a_j y_j² + b_j y_j + c_j)/y_j²`.
pub fn step_identity_holds(fam: &CoefficientFamily, orbit: &FieldOrbit) -> Result<bool, DegreeError> {
    for i in 1..orbit.iterates.len().saturating_sub(1) {
        let v = fam.at(orbit.index(i))?;
        let y = &orbit.iterates[i];
        let y2 = y.square();
        let lhs = &orbit.iterates[i + 1] + &orbit.iterates[i - 1];
        let num = &(&y2.scale(&v.a) + &y.scale(&v.b)) + &RationalFunction::constant(v.c.clone());
        let rhs = num.try_div(&y2).map_err(|_| DegreeError::SingularOrbit {
            index: orbit.index(i),
        })?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Running sums `D_n = Σ_{j ≤ n} d_j`.
pub fn cumulative_degree(degrees: &[usize]) -> Vec<u64> {
    degrees
        .iter()
        .scan(0u64, |acc, &d| {
            *acc += d as u64;
            Some(*acc)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyEstimate {
    /// Least-squares slope of `log d_j` against `j` over the tail.
    pub slope: f64,
    /// `log(d_last / d_first) / (last - first)` over the same tail.
    pub endpoint_rate: f64,
    pub tail_window: (i64, i64),
    pub cumulative: Vec<u64>,
}

/// Entropy estimate from the last `tail_fraction` of the orbit (at least
/// four iterates).
pub fn entropy_estimate(orbit: &FieldOrbit, tail_fraction: f64) -> Result<EntropyEstimate, DegreeError> {
    entropy_of_degrees(orbit.start_index, &orbit.degrees, tail_fraction)
}

/// [`entropy_estimate`] on a bare degree sequence starting at index `start`.
pub fn entropy_of_degrees(
    start: i64,
    degrees: &[usize],
    tail_fraction: f64,
) -> Result<EntropyEstimate, DegreeError> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(DegreeError::DegenerateWindow(format!(
            "tail fraction {tail_fraction} outside (0, 1]"
        )));
    }
    let n = degrees.len();
    let len = ((n as f64 * tail_fraction).ceil() as usize).clamp(1, n.max(1));
    let first = start + (n - len) as i64;
    entropy_on_window(start, degrees, first, start + n as i64 - 1)
}

/// Entropy estimate over the explicit index window `lo..=hi` of a degree
/// sequence starting at index `start`.
pub fn entropy_on_window(
    start: i64,
    degrees: &[usize],
    lo: i64,
    hi: i64,
) -> Result<EntropyEstimate, DegreeError> {
    let end = start + degrees.len() as i64 - 1;
    if lo < start || hi > end || hi - lo + 1 < 4 {
        return Err(DegreeError::DegenerateWindow(format!(
            "window [{lo}, {hi}] needs at least 4 iterates inside [{start}, {end}]"
        )));
    }
    let tail = &degrees[(lo - start) as usize..=(hi - start) as usize];
    if tail.contains(&0) {
        return Err(DegreeError::DegenerateWindow(
            "degree 0 inside the tail window".into(),
        ));
    }
    let xs: Vec<f64> = (lo..=hi).map(|j| j as f64).collect();
    let ys: Vec<f64> = tail.iter().map(|&d| (d as f64).ln()).collect();
    let fit = linear_fit(&xs, &ys).expect("at least four distinct abscissae");
    let endpoint_rate = (ys[ys.len() - 1] - ys[0]) / (hi - lo) as f64;
    Ok(EntropyEstimate {
        slope: fit.slope,
        endpoint_rate,
        tail_window: (lo, hi),
        cumulative: cumulative_degree(degrees),
    })
}

/// Least-squares quadratic in the index through the degree sequence.
pub fn quadratic_degree_fit(orbit: &FieldOrbit) -> Option<QuadraticFit> {
    let xs: Vec<f64> = (0..orbit.degrees.len()).map(|i| orbit.index(i) as f64).collect();
    let ys: Vec<f64> = orbit.degrees.iter().map(|&d| d as f64).collect();
    quadratic_fit(&xs, &ys)
}

/// Order of every iterate at `point`; `None` for identically zero iterates.
pub fn local_order_trace(orbit: &FieldOrbit, point: &Point) -> Vec<Option<i64>> {
    orbit
        .iterates
        .iter()
        .map(|y| (!y.is_zero()).then(|| y.local_order(point)))
        .collect()
}

/// Degrees from the orbit reduced modulo two word-sized primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularDegrees {
    pub degrees: Vec<usize>,
    pub primes: (u64, u64),
}

/// Degree sequence via reduction modulo pairs of primes; a pair is accepted
/// when both runs succeed and agree at every step. Degrees modulo a prime
/// can only drop, so agreement of two independent primes is the acceptance
/// test for the fast path.
pub fn modular_degrees(
    fam: &CoefficientFamily,
    start: i64,
    y0: &RationalFunction,
    y1: &RationalFunction,
    count: usize,
) -> Result<ModularDegrees, DegreeError> {
    let mut coeffs = Vec::with_capacity(count);
    for step in 0..count {
        coeffs.push(fam.at(start + 1 + step as i64)?);
    }
    let mut primes = word_primes().iter().copied();
    let mut runs: Vec<(u64, Result<Vec<usize>, i64>)> = Vec::new();
    while runs.len() < 8 {
        let Some(p) = primes.next() else { break };
        let Some(run) = run_mod_p(p, start, &coeffs, y0, y1) else {
            continue;
        };
        // Accept as soon as two runs agree.
        if let Some((q, _)) = runs.iter().find(|(_, r)| *r == run) {
            let q = *q;
            return match run {
                Ok(degrees) => Ok(ModularDegrees {
                    degrees,
                    primes: (q, p),
                }),
                Err(index) => Err(DegreeError::SingularOrbit { index }),
            };
        }
        runs.push((p, run));
    }
    Err(DegreeError::NoGoodPrimes)
}

/// One modular run; `None` when `p` divides a denominator or a leading
/// coefficient of the input data, `Err(index)` when an iterate vanishes.
fn run_mod_p(
    p: u64,
    start: i64,
    coeffs: &[CoefficientValues],
    y0: &RationalFunction,
    y1: &RationalFunction,
) -> Option<Result<Vec<usize>, i64>> {
    let f = Zp::new(p);
    let abc: Vec<[u64; 3]> = coeffs
        .iter()
        .map(|v| Some([f.reduce_rat(&v.a)?, f.reduce_rat(&v.b)?, f.reduce_rat(&v.c)?]))
        .collect::<Option<_>>()?;
    let mut prev = reduce_ratfn(&f, y0)?;
    let mut cur = reduce_ratfn(&f, y1)?;
    let mut degrees = vec![prev.degree(), cur.degree()];
    for (step, &[a, b, c]) in abc.iter().enumerate() {
        if cur.is_zero() {
            return Some(Err(start + 1 + step as i64));
        }
        let (n, d) = (&cur.num, &cur.den);
        let nn = modp::mul(&f, n, n);
        let mut num = modp::scale(&f, &modp::mul(&f, d, d), c);
        num = modp::add(&f, &num, &modp::scale(&f, &modp::mul(&f, n, d), b));
        num = modp::add(&f, &num, &modp::scale(&f, &nn, a));
        // gcd(cD² + bND + aN², N) = gcd(cD², N) = 1 unless c vanishes.
        let rhs = if c == 0 {
            RatFnP::new(&f, num, nn)
        } else {
            RatFnP::from_coprime(&f, num, nn)
        };
        let next = rhs.sub(&f, &prev);
        degrees.push(next.degree());
        prev = std::mem::replace(&mut cur, next);
    }
    Some(Ok(degrees))
}

fn reduce_poly(f: &Zp, p: &Polynomial) -> Option<PolyP> {
    let mut out: PolyP = p.primitive().iter().map(|c| f.reduce_int(c)).collect();
    modp::trim(&mut out);
    Some(modp::scale(f, &out, f.reduce_rat(p.content())?))
}

/// Reduction that preserves the degree, or `None`.
fn reduce_ratfn(f: &Zp, y: &RationalFunction) -> Option<RatFnP> {
    let num = reduce_poly(f, y.num())?;
    let den = reduce_poly(f, y.den())?;
    if num.len() != y.num().len() || den.len() != y.den().len() {
        return None;
    }
    let r = RatFnP::new(f, num, den);
    (r.degree() == y.degree()).then_some(r)
}

/// Evaluates every iterate at `z`; `None` where `z` is a pole.
pub fn specialize(orbit: &FieldOrbit, z: &BigRational) -> Vec<Option<BigRational>> {
    orbit.iterates.iter().map(|y| y.eval_at(z).ok()).collect()
}
