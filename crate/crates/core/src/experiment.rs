//! Configuration-driven experiments: a TOML spec in, a JSON or CSV report
//! out.
//!
//! ```toml
//! kind = "heights"              # confine | degrees | heights | decompose
//! values = ["3/4", "-10/9"]     # decompose only; must precede the tables
//!
//! [coefficients]                # expressions in j
//! a = "0"
//! b = "j"
//! c = "1"
//!
//! [seeds]                       # in z for degrees, rational literals for heights
//! y0 = "1"
//! y1 = "2"
//!
//! [range]
//! start = 0                     # r0 (degrees, heights) or first base index (confine)
//! end = 50                      # last base index (confine)
//! steps = 40                    # iteration count (degrees, heights)
//!
//! [analysis]
//! delta = 0.25
//! places = ["2", "3", "5", "inf"]
//! tail_fraction = 0.5
//! window = 8
//! fast_degrees = false
//!
//! [output]
//! path = "out.json"
//! format = "json"               # json | csv
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{height_decomposition, ArithError, BigRational, Place};
use crate::confine::{confinement_scan, ConfineError, Form, Verdict};
use crate::degree::{entropy_of_degrees, iterate_field, modular_degrees, DegreeError, EntropyEstimate};
use crate::fit::{quadratic_fit, QuadraticFit};
use crate::height::{
    classify_growth, cumulative_height, iterate_rationals, naive_height_violations, verify_blowup_lemma,
    verify_confinement_lemma, GrowthReport, HeightError, LemmaCheckRecord,
};
use crate::laurent::{LaurentError, DEFAULT_WINDOW};
use crate::poly::{parse_rational, parse_rational_function, CoefficientFamily, PolyError};

pub const SCHEMA: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Confine,
    Degrees,
    Heights,
    Decompose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficients {
    pub a: String,
    pub b: String,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    pub y0: String,
    pub y1: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    #[serde(default)]
    pub start: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Analysis {
    pub delta: f64,
    pub places: Vec<Place>,
    pub tail_fraction: f64,
    pub window: usize,
    pub fast_degrees: bool,
}

impl Default for Analysis {
    fn default() -> Self {
        Analysis {
            delta: 0.25,
            places: vec![Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Infinity],
            tail_fraction: 0.5,
            window: DEFAULT_WINDOW,
            fast_degrees: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Coefficients>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Seeds>,
    #[serde(default)]
    pub range: Range,
    #[serde(default)]
    pub analysis: Analysis,
    #[serde(default)]
    pub output: Output,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("spec parse error: {0}")]
    Syntax(String),
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> SpecError {
    SpecError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

/// Parses and validates a spec. Syntax errors carry the line and column
/// reported by the TOML reader; validation errors name the field.
pub fn parse_spec(text: &str) -> Result<ExperimentSpec, SpecError> {
    let spec: ExperimentSpec = toml::from_str(text).map_err(|e| SpecError::Syntax(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

impl ExperimentSpec {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec is always representable in TOML")
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let a = &self.analysis;
        if !(a.delta > 0.0 && a.delta < 0.5) {
            return Err(invalid(
                "analysis.delta",
                format!("{} is outside (0, 1/2)", a.delta),
            ));
        }
        if !(a.tail_fraction > 0.0 && a.tail_fraction <= 1.0) {
            return Err(invalid(
                "analysis.tail_fraction",
                format!("{} is outside (0, 1]", a.tail_fraction),
            ));
        }
        if a.window == 0 {
            return Err(invalid("analysis.window", "must be positive"));
        }
        match self.kind {
            Kind::Decompose => {
                if self.values.is_empty() {
                    return Err(invalid("values", "at least one rational is required"));
                }
                self.decompose_values()?;
            }
            Kind::Confine => {
                self.family()?;
                let end = self
                    .range
                    .end
                    .ok_or_else(|| invalid("range.end", "required for confine"))?;
                if end < self.range.start {
                    return Err(invalid(
                        "range",
                        format!("empty range [{}, {end}]", self.range.start),
                    ));
                }
            }
            Kind::Degrees | Kind::Heights => {
                self.family()?;
                match self.range.steps {
                    None => return Err(invalid("range.steps", "required")),
                    Some(0) => return Err(invalid("range.steps", "must be positive")),
                    Some(_) => {}
                }
                if self.kind == Kind::Degrees {
                    self.field_seeds()?;
                } else {
                    self.rational_seeds()?;
                    if a.places.is_empty() {
                        return Err(invalid("analysis.places", "at least one place is required"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Result<CoefficientFamily, SpecError> {
        let c = self
            .coefficients
            .as_ref()
            .ok_or_else(|| invalid("coefficients", "required"))?;
        let field = |name: &str, src: &str| {
            parse_rational_function(src, "j")
                .map_err(|e| invalid(&format!("coefficients.{name}"), e.to_string()))
        };
        let (fa, fb, fc) = (field("a", &c.a)?, field("b", &c.b)?, field("c", &c.c)?);
        CoefficientFamily::new(fa, fb, fc).map_err(|e| match e {
            PolyError::ZeroC => invalid("coefficients.c", "c ≢ 0 is required"),
            other => invalid("coefficients", other.to_string()),
        })
    }

    fn seeds(&self) -> Result<&Seeds, SpecError> {
        self.seeds.as_ref().ok_or_else(|| invalid("seeds", "required"))
    }

    fn field_seeds(&self) -> Result<[crate::poly::RationalFunction; 2], SpecError> {
        let s = self.seeds()?;
        let f = |name: &str, src: &str| {
            parse_rational_function(src, "z").map_err(|e| invalid(&format!("seeds.{name}"), e.to_string()))
        };
        Ok([f("y0", &s.y0)?, f("y1", &s.y1)?])
    }

    fn rational_seeds(&self) -> Result<[BigRational; 2], SpecError> {
        let s = self.seeds()?;
        let f = |name: &str, src: &str| {
            parse_rational(src).map_err(|e| invalid(&format!("seeds.{name}"), e.to_string()))
        };
        Ok([f("y0", &s.y0)?, f("y1", &s.y1)?])
    }

    fn decompose_values(&self) -> Result<Vec<BigRational>, SpecError> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, src)| {
                let x = parse_rational(src).map_err(|e| invalid(&format!("values[{i}]"), e.to_string()))?;
                if x.is_zero() {
                    return Err(invalid(&format!("values[{i}]"), "0 has no height decomposition"));
                }
                Ok(x)
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub engine_version: &'static str,
    pub spec: ExperimentSpec,
    pub result: RunOutput,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RunOutput {
    Confine(ConfineOutput),
    Degrees(DegreesOutput),
    Heights(HeightsOutput),
    Decompose(DecomposeOutput),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfineOutput {
    pub form: Form,
    /// `b_j = A j + B`, `c_j = C` when the family is of dP1 form.
    pub parameters: Option<BTreeMap<String, String>>,
    pub identities: BTreeMap<String, String>,
    pub rows: Vec<ConfineRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfineRow {
    pub j: i64,
    pub laurent_verdict: Verdict,
    pub residual_verdict: Verdict,
    pub residuals: [String; 3],
    pub valuations: Vec<Option<i64>>,
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreesOutput {
    /// `"exact"` or `"modular"`.
    pub method: &'static str,
    pub primes: Option<(u64, u64)>,
    pub rows: Vec<DegreeRow>,
    pub entropy: Option<EntropyEstimate>,
    pub entropy_note: Option<String>,
    pub quadratic_fit: Option<QuadraticFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeRow {
    pub j: i64,
    pub degree: usize,
    pub cumulative: u64,
    /// Numerator and denominator degrees (exact path only).
    pub num_degree: Option<usize>,
    pub den_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeightsOutput {
    pub rows: Vec<HeightRow>,
    pub growth: Option<GrowthReport>,
    pub growth_note: Option<String>,
    pub naive_height_violations: Vec<i64>,
    pub lemma_checks: Vec<LemmaSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeightRow {
    pub j: i64,
    pub value: String,
    pub height: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaSummary {
    /// `"blowup"` for `a ≢ 0`, `"confinement"` for `a ≡ 0`.
    pub lemma: &'static str,
    pub place: Place,
    pub checked: usize,
    pub premise_held: usize,
    pub violations: usize,
    pub records: Vec<LemmaCheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposeOutput {
    pub rows: Vec<DecomposeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposeRow {
    pub value: String,
    pub contributions: BTreeMap<Place, f64>,
    pub total: f64,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("singular orbit: {0}")]
    Singular(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("{0}")]
    Analyzer(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// Process exit status: 2 validation, 3 singular orbit, 4 precision
    /// exhausted, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Spec(_) => 2,
            RunError::Singular(_) => 3,
            RunError::Precision(_) => 4,
            RunError::Analyzer(_) | RunError::Io(_) => 1,
        }
    }
}

impl From<ConfineError> for RunError {
    fn from(e: ConfineError) -> Self {
        match e {
            ConfineError::Laurent(LaurentError::PrecisionExhausted | LaurentError::ZeroSeries) => {
                RunError::Precision(e.to_string())
            }
            other => RunError::Analyzer(other.to_string()),
        }
    }
}

impl From<DegreeError> for RunError {
    fn from(e: DegreeError) -> Self {
        match e {
            DegreeError::SingularOrbit { .. } => RunError::Singular(e.to_string()),
            DegreeError::NoGoodPrimes => RunError::Precision(e.to_string()),
            other => RunError::Analyzer(other.to_string()),
        }
    }
}

impl From<HeightError> for RunError {
    fn from(e: HeightError) -> Self {
        match e {
            HeightError::Singular { .. } => RunError::Singular(e.to_string()),
            other => RunError::Analyzer(other.to_string()),
        }
    }
}

impl From<ArithError> for RunError {
    fn from(e: ArithError) -> Self {
        RunError::Analyzer(e.to_string())
    }
}

pub fn run(spec: &ExperimentSpec) -> Result<RunReport, RunError> {
    spec.validate()?;
    let t0 = Instant::now();
    let result = match spec.kind {
        Kind::Confine => RunOutput::Confine(run_confine(spec)?),
        Kind::Degrees => RunOutput::Degrees(run_degrees(spec)?),
        Kind::Heights => RunOutput::Heights(run_heights(spec)?),
        Kind::Decompose => RunOutput::Decompose(run_decompose(spec)?),
    };
    Ok(RunReport {
        schema: SCHEMA,
        engine_version: env!("CARGO_PKG_VERSION"),
        spec: spec.clone(),
        result,
        elapsed_seconds: t0.elapsed().as_secs_f64(),
    })
}

fn run_confine(spec: &ExperimentSpec) -> Result<ConfineOutput, RunError> {
    let fam = spec.family()?;
    let hi = spec.range.end.expect("validated");
    let scan = confinement_scan(&fam, spec.range.start, hi, spec.analysis.window)?;
    let v = &scan.verdict;
    let parameters = v.parameters.as_ref().map(|p| {
        BTreeMap::from([
            ("A".to_string(), p.a.to_string()),
            ("B".to_string(), p.b.to_string()),
            ("C".to_string(), p.c.to_string()),
        ])
    });
    let identities = BTreeMap::from([
        ("a_next".to_string(), v.identities.a_next.display_in("j")),
        ("c_shift".to_string(), v.identities.c_shift.display_in("j")),
        ("b_second".to_string(), v.identities.b_second.display_in("j")),
    ]);
    let rows = scan
        .reports
        .iter()
        .map(|r| ConfineRow {
            j: r.base_index,
            laurent_verdict: r.laurent_verdict,
            residual_verdict: r.residual_verdict(),
            residuals: r.residuals.clone().map(|x| x.to_string()),
            valuations: r.orbit_valuations.clone(),
            window: r.window,
        })
        .collect();
    Ok(ConfineOutput {
        form: v.form,
        parameters,
        identities,
        rows,
    })
}

fn run_degrees(spec: &ExperimentSpec) -> Result<DegreesOutput, RunError> {
    let fam = spec.family()?;
    let [y0, y1] = spec.field_seeds()?;
    let steps = spec.range.steps.expect("validated");
    let start = spec.range.start;
    let (method, primes, degrees, parts) = if spec.analysis.fast_degrees {
        let m = modular_degrees(&fam, start, &y0, &y1, steps)?;
        ("modular", Some(m.primes), m.degrees, None)
    } else {
        let orbit = iterate_field(&fam, start, y0, y1, steps)?;
        let parts: Vec<(usize, usize)> = orbit
            .iterates
            .iter()
            .map(|y| (y.num().degree().unwrap_or(0), y.den().degree().unwrap_or(0)))
            .collect();
        ("exact", None, orbit.degrees, Some(parts))
    };
    let cumulative = crate::degree::cumulative_degree(&degrees);
    let rows = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| DegreeRow {
            j: start + i as i64,
            degree: d,
            cumulative: cumulative[i],
            num_degree: parts.as_ref().map(|p| p[i].0),
            den_degree: parts.as_ref().map(|p| p[i].1),
        })
        .collect();
    let (entropy, entropy_note) = match entropy_of_degrees(start, &degrees, spec.analysis.tail_fraction) {
        Ok(e) => (Some(e), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let xs: Vec<f64> = (0..degrees.len()).map(|i| (start + i as i64) as f64).collect();
    let ys: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
    Ok(DegreesOutput {
        method,
        primes,
        rows,
        entropy,
        entropy_note,
        quadratic_fit: quadratic_fit(&xs, &ys),
    })
}

fn run_heights(spec: &ExperimentSpec) -> Result<HeightsOutput, RunError> {
    let fam = spec.family()?;
    let [y0, y1] = spec.rational_seeds()?;
    let steps = spec.range.steps.expect("validated");
    let orbit = iterate_rationals(&fam, spec.range.start, y0, y1, steps)?;
    let cumulative = cumulative_height(&orbit);
    let rows = orbit
        .iterates
        .iter()
        .enumerate()
        .map(|(i, y)| HeightRow {
            j: orbit.index(i),
            value: rational_csv(y),
            height: orbit.heights[i],
            cumulative: cumulative[i],
        })
        .collect();
    let (growth, growth_note) = match classify_growth(&orbit) {
        Ok(g) => (Some(g), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let mut lemma_checks = Vec::new();
    for &place in &spec.analysis.places {
        let (lemma, records) = if fam.a.is_zero() {
            (
                "confinement",
                verify_confinement_lemma(&orbit, &fam, place, spec.analysis.delta)?,
            )
        } else {
            (
                "blowup",
                verify_blowup_lemma(&orbit, &fam, place, spec.analysis.delta)?,
            )
        };
        lemma_checks.push(LemmaSummary {
            lemma,
            place,
            checked: records.len(),
            premise_held: records.iter().filter(|r| r.premise_held).count(),
            violations: records.iter().filter(|r| r.violated()).count(),
            records,
        });
    }
    Ok(HeightsOutput {
        rows,
        growth,
        growth_note,
        naive_height_violations: naive_height_violations(&fam, &orbit)?,
        lemma_checks,
    })
}

fn run_decompose(spec: &ExperimentSpec) -> Result<DecomposeOutput, RunError> {
    let rows = spec
        .decompose_values()?
        .iter()
        .map(|x| {
            let d = height_decomposition(x)?;
            Ok(DecomposeRow {
                value: rational_csv(x),
                contributions: d.contributions,
                total: d.total,
            })
        })
        .collect::<Result<_, RunError>>()?;
    Ok(DecomposeOutput { rows })
}

// ---------------------------------------------------------------------------
// Serialisation

impl RunReport {
    /// The series engine could not decide some base index even after
    /// doubling the window.
    pub fn precision_exhausted(&self) -> bool {
        match &self.result {
            RunOutput::Confine(o) => o.rows.iter().any(|r| r.laurent_verdict == Verdict::Indeterminate),
            _ => false,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// One row per index, preceded by `# key: value` summary lines.
    pub fn to_csv(&self) -> String {
        let mut head = String::new();
        let _ = writeln!(head, "# schema: {SCHEMA}");
        let _ = writeln!(head, "# engine_version: {}", self.engine_version);
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        match &self.result {
            RunOutput::Confine(o) => {
                let _ = writeln!(head, "# form: {}", json_str(&o.form));
                if let Some(p) = &o.parameters {
                    let _ = writeln!(head, "# parameters: A={} B={} C={}", p["A"], p["B"], p["C"]);
                }
                w.write_record([
                    "j",
                    "laurent_verdict",
                    "residual_verdict",
                    "a_next",
                    "c_shift",
                    "b_second",
                    "valuations",
                    "window",
                ])
                .expect("in-memory write");
                for r in &o.rows {
                    let vals: Vec<String> = r
                        .valuations
                        .iter()
                        .map(|v| v.map_or("?".to_string(), |v| v.to_string()))
                        .collect();
                    w.write_record([
                        r.j.to_string(),
                        json_str(&r.laurent_verdict),
                        json_str(&r.residual_verdict),
                        rational_csv_str(&r.residuals[0]),
                        rational_csv_str(&r.residuals[1]),
                        rational_csv_str(&r.residuals[2]),
                        vals.join(";"),
                        r.window.to_string(),
                    ])
                    .expect("in-memory write");
                }
            }
            RunOutput::Degrees(o) => {
                let _ = writeln!(head, "# method: {}", o.method);
                match &o.entropy {
                    Some(e) => {
                        let _ = writeln!(head, "# entropy_slope: {}", sig12(e.slope));
                        let _ = writeln!(head, "# endpoint_rate: {}", sig12(e.endpoint_rate));
                        let _ = writeln!(head, "# tail_window: {}..{}", e.tail_window.0, e.tail_window.1);
                    }
                    None => {
                        let note = o.entropy_note.as_deref().unwrap_or("unavailable");
                        let _ = writeln!(head, "# entropy: {note}");
                    }
                }
                w.write_record(["j", "degree", "cumulative_degree", "num_degree", "den_degree"])
                    .expect("in-memory write");
                for r in &o.rows {
                    let opt = |d: Option<usize>| d.map_or(String::new(), |d| sig12(d as f64));
                    w.write_record([
                        r.j.to_string(),
                        sig12(r.degree as f64),
                        sig12(r.cumulative as f64),
                        opt(r.num_degree),
                        opt(r.den_degree),
                    ])
                    .expect("in-memory write");
                }
            }
            RunOutput::Heights(o) => {
                match &o.growth {
                    Some(g) => {
                        let _ = writeln!(head, "# growth_model: {}", json_str(&g.model));
                        let _ = writeln!(head, "# poly_exponent: {}", sig12(g.poly_exponent));
                        let _ = writeln!(head, "# exp_rate: {}", sig12(g.exp_rate));
                    }
                    None => {
                        let note = o.growth_note.as_deref().unwrap_or("unavailable");
                        let _ = writeln!(head, "# growth: {note}");
                    }
                }
                let _ = writeln!(
                    head,
                    "# naive_height_violations: {}",
                    o.naive_height_violations.len()
                );
                for l in &o.lemma_checks {
                    let _ = writeln!(
                        head,
                        "# lemma {} at {}: checked {}, premise held {}, violations {}",
                        l.lemma, l.place, l.checked, l.premise_held, l.violations
                    );
                }
                w.write_record(["j", "value", "height", "cumulative_height"])
                    .expect("in-memory write");
                for r in &o.rows {
                    w.write_record([
                        r.j.to_string(),
                        r.value.clone(),
                        sig12(r.height),
                        sig12(r.cumulative),
                    ])
                    .expect("in-memory write");
                }
            }
            RunOutput::Decompose(o) => {
                let places: BTreeSet<Place> = o
                    .rows
                    .iter()
                    .flat_map(|r| r.contributions.keys().copied())
                    .collect();
                let mut header = vec!["value".to_string()];
                header.extend(places.iter().map(|p| format!("log+|x|_{p}")));
                header.push("total".to_string());
                w.write_record(&header).expect("in-memory write");
                for r in &o.rows {
                    let mut rec = vec![r.value.clone()];
                    rec.extend(
                        places
                            .iter()
                            .map(|p| sig12(r.contributions.get(p).copied().unwrap_or(0.0))),
                    );
                    rec.push(sig12(r.total));
                    w.write_record(&rec).expect("in-memory write");
                }
            }
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
        head + &body
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

fn json_str<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v).expect("serialisable") {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

/// Float with 12 significant digits, positional notation.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn rational_csv_str(s: &str) -> String {
    BigRational::from_str(s).map_or_else(|_| s.to_string(), |x| rational_csv(&x))
}

/// Exact decimal when the expansion terminates within 18 significant
/// digits, `num/den` otherwise.
pub fn rational_csv(x: &BigRational) -> String {
    const MAX_DIGITS: usize = 18;
    let (num, den) = (x.numer(), x.denom());
    if den == &BigInt::from(1) {
        return num.to_string();
    }
    let fallback = || format!("{num}/{den}");
    let (mut d, mut twos, mut fives) = (den.clone(), 0u32, 0u32);
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d != BigInt::from(1) {
        return fallback();
    }
    let k = twos.max(fives);
    let scaled = num * BigInt::from(10).pow(k) / den;
    let digits = scaled.abs().to_string();
    let significant = digits.trim_start_matches('0').trim_end_matches('0').len();
    if significant > MAX_DIGITS || k.to_usize().is_none_or(|k| k > MAX_DIGITS) {
        return fallback();
    }
    let k = k as usize;
    let padded = format!("{digits:0>width$}", width = k + 1);
    let (int_part, frac) = padded.split_at(padded.len() - k);
    let sign = if scaled.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac}")
}
