//! Singularity confinement: push the orbit through `y_{j0} = ε` with
//! `y_{j0-1} = κ` and see whether `y_{j0+3}` comes back finite, and compare
//! with the closed-form residual conditions on the coefficients.

use num_traits::Zero;
use thiserror::Error;

use crate::arith::{int, BigRational};
use crate::laurent::{LaurentError, Limit, TruncatedLaurent, DEFAULT_WINDOW};
use crate::poly::{CoefficientFamily, PolyError, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfineError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("c vanishes at the base index {0}")]
    ZeroC(i64),
    #[error("at most 4 steps past the singularity are supported (got {0})")]
    TooManySteps(usize),
    #[error("empty index range")]
    EmptyRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Confined,
    Unconfined,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfinementReport {
    pub base_index: i64,
    pub laurent_verdict: Verdict,
    /// `(a_{j0+1}, c_{j0+2} - c_{j0}, b_{j0+2} - 2 b_{j0+1} + b_{j0})`.
    pub residuals: [BigRational; 3],
    /// ε-valuations of `y_{j0} … y_{j0+4}`; `None` where the window ran out.
    pub orbit_valuations: Vec<Option<i64>>,
    /// Window that produced the verdict (doubled once on an indeterminate).
    pub window: usize,
}

impl ConfinementReport {
    pub fn residual_verdict(&self) -> Verdict {
        if self.residuals.iter().all(|r| r.is_zero()) {
            Verdict::Confined
        } else {
            Verdict::Unconfined
        }
    }

    /// The two engines agree, or the series engine gave no answer.
    pub fn agrees(&self) -> bool {
        self.laurent_verdict == Verdict::Indeterminate || self.laurent_verdict == self.residual_verdict()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    #[serde(rename = "dP1")]
    Dp1,
    #[serde(rename = "not_dP1")]
    NotDp1,
}

/// `b_j = A j + B`, `c_j = C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dp1Parameters {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl Dp1Parameters {
    pub fn family(&self) -> CoefficientFamily {
        CoefficientFamily::dp1(self.a.clone(), self.b.clone(), self.c.clone())
            .expect("C is nonzero for extracted parameters")
    }
}

/// The confinement conditions as rational functions of `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicResiduals {
    pub a_next: RationalFunction,
    pub c_shift: RationalFunction,
    pub b_second: RationalFunction,
}

impl SymbolicResiduals {
    pub fn of(fam: &CoefficientFamily) -> Self {
        let one = int(1);
        let two = int(2);
        let b1 = fam.b.shift(&one);
        let b2 = fam.b.shift(&two);
        SymbolicResiduals {
            a_next: fam.a.shift(&one),
            c_shift: &fam.c.shift(&two) - &fam.c,
            b_second: &(&b2 - &b1.scale(&two)) + &fam.b,
        }
    }

    pub fn vanish(&self) -> bool {
        self.a_next.is_zero() && self.c_shift.is_zero() && self.b_second.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationVerdict {
    pub form: Form,
    pub parameters: Option<Dp1Parameters>,
    pub identities: SymbolicResiduals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    pub verdict: ClassificationVerdict,
    pub reports: Vec<ConfinementReport>,
}

/// Residual triple evaluated at `j0`.
pub fn residuals(fam: &CoefficientFamily, j0: i64) -> Result<[BigRational; 3], ConfineError> {
    let v0 = fam.at(j0)?;
    let v1 = fam.at(j0 + 1)?;
    let v2 = fam.at(j0 + 2)?;
    Ok([v1.a, &v2.c - &v0.c, &(&v2.b - &(&v1.b * int(2))) + &v0.b])
}

/// `y_{j0+1}, …, y_{j0+steps}` as Laurent series in ε over ℚ(κ).
pub fn singular_orbit(
    fam: &CoefficientFamily,
    j0: i64,
    steps: usize,
    window: usize,
) -> Result<Vec<TruncatedLaurent>, ConfineError> {
    if steps > 4 {
        return Err(ConfineError::TooManySteps(steps));
    }
    let (orbit, failure) = run_orbit(fam, j0, steps, window)?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(orbit),
    }
}

/// Iterates as far as the series engine allows; returns the iterates and
/// the error that stopped it early, if any.
fn run_orbit(
    fam: &CoefficientFamily,
    j0: i64,
    steps: usize,
    window: usize,
) -> Result<(Vec<TruncatedLaurent>, Option<LaurentError>), ConfineError> {
    let mut coeffs = Vec::with_capacity(steps);
    for j in j0..j0 + steps as i64 {
        coeffs.push(fam.at(j)?);
    }
    if coeffs.first().is_some_and(|v| v.c.is_zero()) {
        return Err(ConfineError::ZeroC(j0));
    }
    let mut prev = TruncatedLaurent::constant(RationalFunction::x(), window);
    let mut cur = TruncatedLaurent::epsilon(window);
    let mut out = Vec::with_capacity(steps);
    for v in &coeffs {
        let inv = match cur.invert() {
            Ok(inv) => inv,
            Err(e) => return Ok((out, Some(e))),
        };
        let inv2 = inv.mul(&inv);
        let next = TruncatedLaurent::constant(v.a.clone().into(), window)
            .add(&inv.scale_rational(&v.b))
            .add(&inv2.scale_rational(&v.c))
            .sub(&prev);
        out.push(next.clone());
        prev = std::mem::replace(&mut cur, next);
    }
    Ok((out, None))
}

/// Confinement test at one base index, with one retry at double window if
/// the series engine cannot decide.
pub fn confinement_test(
    fam: &CoefficientFamily,
    j0: i64,
    window: usize,
) -> Result<ConfinementReport, ConfineError> {
    let residuals = residuals(fam, j0)?;
    let mut report = attempt(fam, j0, window, &residuals)?;
    if report.laurent_verdict == Verdict::Indeterminate {
        report = attempt(fam, j0, 2 * window, &residuals)?;
    }
    Ok(report)
}

fn attempt(
    fam: &CoefficientFamily,
    j0: i64,
    window: usize,
    residuals: &[BigRational; 3],
) -> Result<ConfinementReport, ConfineError> {
    for j in j0..j0 + 4 {
        fam.at(j)?;
    }
    let (orbit, _) = run_orbit(fam, j0, 4, window)?;
    let laurent_verdict = match orbit.get(2).map(|y| y.limit_at_zero()) {
        Some(Limit::Finite(_)) => Verdict::Confined,
        Some(Limit::Infinite) => Verdict::Unconfined,
        Some(Limit::Indeterminate) | None => Verdict::Indeterminate,
    };
    let mut orbit_valuations = vec![Some(1)];
    orbit_valuations.extend((0..4).map(|i| orbit.get(i).and_then(|y| y.valuation())));
    Ok(ConfinementReport {
        base_index: j0,
        laurent_verdict,
        residuals: residuals.clone(),
        orbit_valuations,
        window,
    })
}

/// Tests every base index in `lo..=hi` and decides whether the family is of
/// discrete Painlevé I form by exact identities in `j`.
pub fn confinement_scan(
    fam: &CoefficientFamily,
    lo: i64,
    hi: i64,
    window: usize,
) -> Result<ScanResult, ConfineError> {
    if lo > hi {
        return Err(ConfineError::EmptyRange);
    }
    let reports = (lo..=hi)
        .map(|j| confinement_test(fam, j, window))
        .collect::<Result<Vec<_>, _>>()?;
    let identities = SymbolicResiduals::of(fam);
    let all_confined = reports.iter().all(|r| r.laurent_verdict == Verdict::Confined);
    let parameters = if all_confined && identities.vanish() {
        extract_parameters(fam)
    } else {
        None
    };
    let form = if parameters.is_some() {
        Form::Dp1
    } else {
        Form::NotDp1
    };
    Ok(ScanResult {
        verdict: ClassificationVerdict {
            form,
            parameters,
            identities,
        },
        reports,
    })
}

/// `(A, B, C)` when `a ≡ 0`, `b` is affine and `c` constant.
pub fn extract_parameters(fam: &CoefficientFamily) -> Option<Dp1Parameters> {
    if !fam.a.is_zero() || !fam.b.is_polynomial() {
        return None;
    }
    let b = fam.b.num();
    if b.degree().is_some_and(|d| d > 1) {
        return None;
    }
    let c = fam.c.as_constant()?;
    Some(Dp1Parameters {
        a: b.coeff(1),
        b: b.coeff(0),
        c,
    })
}

/// Default-window confinement test.
pub fn confinement_test_default(fam: &CoefficientFamily, j0: i64) -> Result<ConfinementReport, ConfineError> {
    confinement_test(fam, j0, DEFAULT_WINDOW)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::poly::Polynomial;

    fn fam(a: &str, b: &str, c: &str) -> CoefficientFamily {
        CoefficientFamily::parse(a, b, c).unwrap()
    }

    fn k() -> RationalFunction {
        RationalFunction::x()
    }

    fn cst(x: BigRational) -> RationalFunction {
        RationalFunction::constant(x)
    }

    #[test]
    fn orbit_of_pure_inverse_square() {
        let f = fam("0", "0", "1");
        let ys = singular_orbit(&f, 3, 2, DEFAULT_WINDOW).unwrap();
        assert_eq!(ys[0].start(), -2);
        assert_eq!(ys[0].coeff(-2), Some(RationalFunction::one()));
        assert_eq!(ys[0].coeff(-1), Some(RationalFunction::zero()));
        assert_eq!(ys[0].coeff(0), Some(-&k()));
        assert!((1..6).all(|e| ys[0].coeff(e) == Some(RationalFunction::zero())));
        // y2 = -ε + O(ε³)
        assert_eq!(ys[1].start(), 1);
        assert_eq!(ys[1].coeff(1), Some(cst(int(-1))));
        assert_eq!(ys[1].coeff(2), Some(RationalFunction::zero()));
    }

    #[test]
    fn leading_terms_are_the_coefficients() {
        let f = fam("1/j", "2*j+1", "j^2+3");
        let j0 = 4;
        let v0 = f.at(j0).unwrap();
        let v1 = f.at(j0 + 1).unwrap();
        let ys = singular_orbit(&f, j0, 2, DEFAULT_WINDOW).unwrap();
        assert_eq!(ys[0].coeff(-2), Some(cst(v0.c.clone())));
        assert_eq!(ys[0].coeff(-1), Some(cst(v0.b.clone())));
        assert_eq!(ys[1].coeff(0), Some(cst(v1.a.clone())));
        assert_eq!(ys[1].coeff(1), Some(cst(int(-1))));
        assert_eq!(ys[1].coeff(2), Some(cst(&v1.b / &v0.c)));
    }

    #[test]
    fn spec_families() {
        let r = confinement_test(&fam("0", "j", "1"), 5, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.residuals, [int(0), int(0), int(0)]);
        assert_eq!(r.laurent_verdict, Verdict::Confined);
        assert_eq!(
            r.orbit_valuations,
            vec![Some(1), Some(-2), Some(1), Some(0), Some(0)]
        );

        let r = confinement_test(&fam("1", "0", "1"), 5, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.residuals[0], int(1));
        assert_eq!(r.laurent_verdict, Verdict::Unconfined);
        assert_eq!(r.orbit_valuations[3], Some(-2));

        let r = confinement_test(&fam("0", "0", "j"), 5, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.residuals[1], int(2));
        assert_eq!(r.laurent_verdict, Verdict::Unconfined);
        assert!(r.agrees());
    }

    #[test]
    fn second_difference_only() {
        let r = confinement_test(&fam("0", "j^2", "1"), 3, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.residuals, [int(0), int(0), int(2)]);
        assert_eq!(r.laurent_verdict, Verdict::Unconfined);
        assert_eq!(r.orbit_valuations[3], Some(-1));
    }

    #[test]
    fn scans() {
        let s = confinement_scan(&fam("0", "3*j+1", "2"), 2, 50, DEFAULT_WINDOW).unwrap();
        assert_eq!(s.verdict.form, Form::Dp1);
        let p = s.verdict.parameters.clone().unwrap();
        assert_eq!((p.a.clone(), p.b.clone(), p.c.clone()), (int(3), int(1), int(2)));
        assert_eq!(p.family(), fam("0", "3*j+1", "2"));

        let s = confinement_scan(&fam("0", "j^2", "1"), 2, 50, DEFAULT_WINDOW).unwrap();
        assert_eq!(s.verdict.form, Form::NotDp1);
        assert!(s.reports.iter().all(|r| r.residuals[2] == int(2)));
        assert_eq!(s.verdict.identities.b_second, cst(int(2)));

        let s = confinement_scan(&fam("1/j", "0", "1"), 2, 50, DEFAULT_WINDOW).unwrap();
        assert_eq!(s.verdict.form, Form::NotDp1);
        for r in &s.reports {
            assert_eq!(r.residuals[0], rat(1, r.base_index + 1));
        }
        assert_eq!(
            s.verdict.identities.a_next,
            RationalFunction::new(Polynomial::one(), Polynomial::from_i64(&[1, 1])).unwrap()
        );
        assert_eq!(
            confinement_scan(&fam("0", "j", "1"), 5, 4, DEFAULT_WINDOW),
            Err(ConfineError::EmptyRange)
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            singular_orbit(&fam("0", "0", "j-3"), 3, 2, DEFAULT_WINDOW),
            Err(ConfineError::ZeroC(3))
        );
        assert_eq!(
            confinement_test(&fam("0", "1/(j-6)", "1"), 4, DEFAULT_WINDOW),
            Err(ConfineError::Poly(PolyError::CoefficientPole(6)))
        );
        assert!(matches!(
            singular_orbit(&fam("0", "0", "1"), 0, 5, DEFAULT_WINDOW),
            Err(ConfineError::TooManySteps(5))
        ));
    }
}
