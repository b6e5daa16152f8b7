//! JSON operator specs and report documents.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::blaschke::{analyze_endomorphism, BlaschkeProduct, EndomorphismOptions};
use crate::error::{Error, Result};
use crate::moebius::{MapClass, MoebiusMap};
use crate::polydisc::{analyze_polydisc, check_independence, Independence, IndependenceClaim, PolydiscOptions, Term, TorusRotation, WeightPolyN};
use crate::spectra::{analyze_disc, verify_report, AnalyzeOptions, CheckResult, SpectrumReport, Verdict};
use crate::weight::WeightPoly;

pub const ENGINE_VERSION: &str = concat!("wcospec-core ", env!("CARGO_PKG_VERSION"));

/// Environment variable naming the default tolerance profile.
pub const PROFILE_ENV: &str = "WCOSPEC_PROFILE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    Disc,
    Polydisc { n: usize },
    Endomorphism,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalForm {
    /// `e^{iθ}(z − p)/(1 − p̄z)`.
    pub theta: f64,
    pub p: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndependenceFlag {
    Declared,
    /// Search for integer relations up to `options.polydisc.q_max`.
    #[default]
    Check,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlaschkeSpec {
    pub zeros: Vec<Complex64>,
    #[serde(default = "one")]
    pub phase: Complex64,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Exactly one map form must be present.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moebius: Option<MoebiusMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<CanonicalForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas_over_pi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independence: Option<IndependenceFlag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blaschke: Option<BlaschkeSpec>,
}

/// Coefficients lowest degree first, or sparse terms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<Term>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub disc: AnalyzeOptions,
    pub polydisc: PolydiscOptions,
    pub endomorphism: EndomorphismOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub algebra: AlgebraSpec,
    pub map: MapSpec,
    pub weight: WeightSpec,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Disc { map: MoebiusMap, weight: WeightPoly },
    Polydisc { rotation: TorusRotation, weight: WeightPolyN },
    Endomorphism { map: BlaschkeProduct, weight: WeightPoly },
}

/// Named default-option sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Default,
    Strict,
    Loose,
}

impl Profile {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "default" => Ok(Profile::Default),
            "strict" => Ok(Profile::Strict),
            "loose" => Ok(Profile::Loose),
            other => Err(Error::Schema(format!(
                "unknown tolerance profile {other:?} (expected default, strict or loose)"
            ))),
        }
    }

    /// Reads [`PROFILE_ENV`]; unset means `Default`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PROFILE_ENV) {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Profile::Default),
        }
    }

    pub fn options(self) -> Options {
        let mut o = Options::default();
        match self {
            Profile::Default => {}
            Profile::Strict => {
                o.disc.tol = 1e-12;
                o.disc.root_tol = 1e-9;
                o.disc.quad_tol = 1e-13;
                o.disc.oracle.eps = 1e-4;
                o.polydisc.integral_tol = 1e-11;
                o.polydisc.q_max = 8;
                o.endomorphism.eps = 1e-4;
            }
            Profile::Loose => {
                o.disc.tol = 1e-7;
                o.disc.root_tol = 1e-6;
                o.disc.quad_tol = 1e-10;
                o.disc.oracle.eps = 1e-2;
                o.polydisc.integral_tol = 1e-7;
                o.endomorphism.eps = 1e-2;
            }
        }
        o
    }
}

/// Recursive object merge; `over` wins.
fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn schema_error(path: &str, e: &serde_json::Error) -> Error {
    let at = if path.is_empty() || path == "." { String::new() } else { format!(" at `{path}`") };
    if e.line() > 0 {
        Error::Schema(format!("line {} column {}{at}: {e}", e.line(), e.column()))
    } else {
        Error::Schema(format!("{}{at}", e))
    }
}

impl OperatorSpec {
    /// Parse JSON, filling unset options from `profile`.
    pub fn parse_with(text: &str, profile: Profile) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let value: Value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            schema_error(&path, e.inner())
        })?;
        Self::from_value(value, profile)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, Profile::from_env()?)
    }

    pub fn from_value(mut value: Value, profile: Profile) -> Result<Self> {
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::Schema("operator spec must be a JSON object".into()))?;
        let mut options = serde_json::to_value(profile.options()).expect("options serialize");
        if let Some(given) = obj.remove("options") {
            if !given.is_object() {
                return Err(Error::Schema("`options` must be an object".into()));
            }
            merge(&mut options, given);
        }
        obj.insert("options".into(), options);
        let spec: OperatorSpec = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            schema_error(&path, e.inner())
        })?;
        spec.check_shape()?;
        Ok(spec)
    }

    fn check_shape(&self) -> Result<()> {
        let m = &self.map;
        let forms = [
            ("moebius", m.moebius.is_some()),
            ("canonical", m.canonical.is_some()),
            ("gammas_over_pi", m.gammas_over_pi.is_some()),
            ("blaschke", m.blaschke.is_some()),
        ];
        let present: Vec<&str> = forms.iter().filter(|f| f.1).map(|f| f.0).collect();
        if present.len() != 1 {
            return Err(Error::Schema(format!(
                "`map` needs exactly one of moebius, canonical, gammas_over_pi, blaschke; found {present:?}"
            )));
        }
        let allowed: &[&str] = match self.algebra {
            AlgebraSpec::Disc => &["moebius", "canonical"],
            AlgebraSpec::Polydisc { .. } => &["gammas_over_pi"],
            AlgebraSpec::Endomorphism => &["blaschke"],
        };
        if !allowed.contains(&present[0]) {
            return Err(Error::Schema(format!(
                "map form `{}` does not match algebra {:?} (expected {})",
                present[0],
                self.algebra,
                allowed.join(" or ")
            )));
        }
        if m.independence.is_some() && m.gammas_over_pi.is_none() {
            return Err(Error::Schema("`map.independence` only applies to gammas_over_pi".into()));
        }
        match (&self.weight.coeffs, &self.weight.terms) {
            (Some(_), None) | (None, Some(_)) => Ok(()),
            _ => Err(Error::Schema("`weight` needs exactly one of coeffs, terms".into())),
        }
    }

    fn one_variable_weight(&self) -> Result<WeightPoly> {
        if let Some(c) = &self.weight.coeffs {
            return WeightPoly::new(c.clone());
        }
        let terms = self.weight.terms.as_deref().unwrap_or_default();
        let mut coeffs: Vec<Complex64> = Vec::new();
        for t in terms {
            if t.exp.len() != 1 {
                return Err(Error::Schema(format!(
                    "term exponent {:?} must have one entry for a one-variable weight",
                    t.exp
                )));
            }
            let k = t.exp[0] as usize;
            if k >= coeffs.len() {
                coeffs.resize(k + 1, Complex64::new(0.0, 0.0));
            }
            coeffs[k] += t.c;
        }
        WeightPoly::new(coeffs)
    }

    /// Validate the map and weight.
    pub fn build(&self) -> Result<Operator> {
        match self.algebra {
            AlgebraSpec::Disc => {
                let map = match (&self.map.moebius, &self.map.canonical) {
                    (Some(m), _) => MoebiusMap::new(m.a, m.b, m.c, m.d)?,
                    (_, Some(c)) => MoebiusMap::canonical(c.theta, c.p),
                    _ => unreachable!("shape checked"),
                };
                Ok(Operator::Disc {
                    map,
                    weight: self.one_variable_weight()?,
                })
            }
            AlgebraSpec::Polydisc { n } => {
                let g = self.map.gammas_over_pi.as_deref().unwrap_or_default();
                if g.len() != n {
                    return Err(Error::Schema(format!("algebra.n = {n} but {} angles given", g.len())));
                }
                let claim = match self.map.independence.unwrap_or_default() {
                    IndependenceFlag::Declared => IndependenceClaim::Declared,
                    IndependenceFlag::Check => IndependenceClaim::CheckedUpTo {
                        q_max: self.options.polydisc.q_max,
                    },
                };
                let rotation = TorusRotation::from_gammas_over_pi(g, claim)?;
                let weight = match (&self.weight.coeffs, &self.weight.terms) {
                    (Some(c), _) => {
                        let terms = c
                            .iter()
                            .enumerate()
                            .map(|(k, &c)| Term { exp: vec![k as u32], c })
                            .collect();
                        WeightPolyN::new(1, terms)?
                    }
                    (_, Some(t)) => {
                        let dim = t.first().map(|t| t.exp.len()).unwrap_or(n);
                        WeightPolyN::new(dim, t.clone())?
                    }
                    _ => unreachable!("shape checked"),
                };
                Ok(Operator::Polydisc { rotation, weight })
            }
            AlgebraSpec::Endomorphism => {
                let b = self.map.blaschke.as_ref().expect("shape checked");
                Ok(Operator::Endomorphism {
                    map: BlaschkeProduct::new(b.zeros.clone(), b.phase)?,
                    weight: self.one_variable_weight()?,
                })
            }
        }
    }

    /// Hex SHA-256 of the canonical serialisation (options included).
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("spec serialize");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub engine: String,
    pub fingerprint: String,
    pub spec: OperatorSpec,
    pub report: SpectrumReport,
    #[serde(default)]
    pub checks: Vec<CheckResult>,
}

impl ReportDocument {
    fn new(spec: &OperatorSpec, report: SpectrumReport, checks: Vec<CheckResult>) -> Self {
        Self {
            engine: ENGINE_VERSION.into(),
            fingerprint: spec.fingerprint(),
            spec: spec.clone(),
            report,
            checks,
        }
    }

    pub fn flagged(&self) -> bool {
        self.checks.iter().chain(&self.report.cited).any(|c| c.verdict == Verdict::Flag)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialize")
    }
}

fn analyze_operator(spec: &OperatorSpec, op: &Operator) -> Result<SpectrumReport> {
    match op {
        Operator::Disc { map, weight } => analyze_disc(map, weight, &spec.options.disc),
        Operator::Polydisc { rotation, weight } => analyze_polydisc(rotation, weight, &spec.options.polydisc),
        Operator::Endomorphism { map, weight } => analyze_endomorphism(weight, map, &spec.options.endomorphism),
    }
}

pub fn analyze(spec: &OperatorSpec) -> Result<ReportDocument> {
    let op = spec.build()?;
    let report = analyze_operator(spec, &op)?;
    Ok(ReportDocument::new(spec, report, Vec::new()))
}

/// Analyze and compare every radius with an independent computation.
pub fn verify(spec: &OperatorSpec) -> Result<ReportDocument> {
    let op = spec.build()?;
    let mut report = analyze_operator(spec, &op)?;
    let checks = match &op {
        Operator::Disc { map, weight } => {
            let v = verify_report(&report, map, weight, &spec.options.disc.oracle)?;
            if report.oracle.is_none() {
                report.oracle = Some(v.oracle);
            }
            v.checks
        }
        Operator::Polydisc { weight, .. } => polydisc_checks(&report, weight),
        Operator::Endomorphism { .. } => {
            let mut checks = Vec::new();
            if let Some(o) = &report.oracle {
                let sound = o.rho.lower <= o.rho.upper && o.rho_min.lower <= o.rho_min.upper;
                checks.push(CheckResult {
                    name: "enclosure_order".into(),
                    closed_form: o.rho.lower,
                    oracle_interval: [o.rho.lower, o.rho.upper],
                    verdict: if sound { Verdict::Ok } else { Verdict::Flag },
                    detail: format!("ρ_min ∈ [{}, {}]", o.rho_min.lower, o.rho_min.upper),
                });
            }
            checks.extend(report.cited.iter().cloned());
            checks
        }
    };
    Ok(ReportDocument::new(spec, report, checks))
}

/// Mean-value check: `exp ∫ ln|w| = |w(0)|` when `w` has no zeros on the
/// closed polydisc.
fn polydisc_checks(report: &SpectrumReport, w: &WeightPolyN) -> Vec<CheckResult> {
    let Some(t) = &report.torus_integral else {
        return Vec::new();
    };
    let w0 = w.constant_term().norm();
    let lo = (t.value - t.est_error).exp();
    let hi = (t.value + t.est_error).exp();
    let mut checks = vec![CheckResult {
        name: "torus_log_integral".into(),
        closed_form: report.rho,
        oracle_interval: [lo, hi],
        verdict: if report.rho >= lo - 1e-6 * report.rho.max(1.0) && report.rho <= hi + 1e-6 * report.rho.max(1.0) {
            Verdict::Ok
        } else {
            Verdict::Flag
        },
        detail: format!("exp of the torus mean of ln|w| ({:?})", t.method),
    }];
    if report.case_tag == "ExampleE3.1" {
        let ok = (t.value - w0.ln()).abs() <= 1e-6;
        checks.push(CheckResult {
            name: "mean_value".into(),
            closed_form: w0.ln(),
            oracle_interval: [t.value - t.est_error, t.value + t.est_error],
            verdict: if ok { Verdict::Ok } else { Verdict::Flag },
            detail: "ln|w(0)| against the torus integral, tolerance 1e-6".into(),
        });
    }
    checks
}

/// One-line description of the spec's map.
pub fn classify_summary(spec: &OperatorSpec) -> Result<String> {
    Ok(match spec.build()? {
        Operator::Disc { map, .. } => describe_class(&map.classify_with(&spec.options.disc.classify())?),
        Operator::Polydisc { rotation, .. } => {
            let g: Vec<String> = rotation.gammas.iter().map(|g| fmt_real(g / std::f64::consts::PI)).collect();
            let indep = match check_independence(&rotation, spec.options.polydisc.q_max) {
                Independence::Declared => "declared".to_string(),
                Independence::Independent { q_max } => format!("no relation up to {q_max}"),
                Independence::DependentWitness { k } => format!("dependent, k = {k:?}"),
            };
            format!("TorusRotation γ/π=({}), independence {indep}", g.join(", "))
        }
        Operator::Endomorphism { map, .. } => {
            let zeros: Vec<String> = map.zeros().iter().map(|z| fmt_complex(*z)).collect();
            format!(
                "Blaschke degree {} zeros=[{}] phase={}",
                map.degree(),
                zeros.join(", "),
                fmt_complex(map.phase())
            )
        }
    })
}

/// One-line summary of a map's class.
pub fn describe_class(class: &MapClass) -> String {
    match class {
        MapClass::Identity => "Identity".into(),
        MapClass::EllipticRational { m, z0 } => {
            format!("EllipticRational m={m} z₀={}", fmt_complex(*z0))
        }
        MapClass::EllipticIrrational {
            z0,
            theta0,
            multiplier,
            ..
        } => format!(
            "EllipticIrrational z₀={} (θ₀={}), multiplier={}",
            fmt_complex(*z0),
            fmt_real(*theta0),
            fmt_complex(*multiplier)
        ),
        MapClass::Parabolic { zeta } => format!("Parabolic ζ={}", fmt_complex(*zeta)),
        MapClass::Hyperbolic {
            zeta1,
            zeta2,
            deriv1,
            deriv2,
        } => format!(
            "Hyperbolic ζ₁={} (|φ′|={}), ζ₂={} (|φ′|={})",
            fmt_complex(*zeta1),
            fmt_real(*deriv1),
            fmt_complex(*zeta2),
            fmt_real(*deriv2)
        ),
    }
}

/// Small fractions exactly, everything else to 6 significant digits, with
/// a true minus sign.
pub fn fmt_real(x: f64) -> String {
    let x = if x.abs() < 1e-12 { 0.0 } else { x };
    let sign = if x < 0.0 { "−" } else { "" };
    let a = x.abs();
    for q in 1..=12u32 {
        let p = (a * q as f64).round();
        if (a * q as f64 - p).abs() < 1e-9 * q as f64 {
            return if q == 1 {
                format!("{sign}{}", p as i64)
            } else {
                format!("{sign}{}/{q}", p as i64)
            };
        }
    }
    let s = format!("{a:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    format!("{sign}{s}")
}

pub fn fmt_complex(z: Complex64) -> String {
    let (re, im) = (z.re, z.im);
    if im.abs() < 1e-12 {
        return fmt_real(re);
    }
    let imag = match fmt_real(im.abs()).as_str() {
        "1" => "i".to_string(),
        s => format!("{s}i"),
    };
    if re.abs() < 1e-12 {
        let sign = if im < 0.0 { "−" } else { "" };
        return format!("{sign}{imag}");
    }
    format!("{}{}{}", fmt_real(re), if im < 0.0 { "−" } else { "+" }, imag)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HYPERBOLIC: &str = r#"{
        "algebra": {"type": "disc"},
        "map": {"moebius": {"a": [1, 0], "b": [0.5, 0], "c": [0.5, 0], "d": [1, 0]}},
        "weight": {"coeffs": [[-2, 0], [1, 0]]}
    }"#;

    #[test]
    fn parse_and_classify() {
        let spec = OperatorSpec::parse_with(HYPERBOLIC, Profile::Default).unwrap();
        let Operator::Disc { map, .. } = spec.build().unwrap() else { panic!() };
        let class = map.classify(1e-9, 64).unwrap();
        assert_eq!(describe_class(&class), "Hyperbolic ζ₁=1 (|φ′|=1/3), ζ₂=−1 (|φ′|=3)");
        assert_eq!(describe_class(&MapClass::Identity), "Identity");
    }

    #[test]
    fn spec_round_trip_and_fingerprint() {
        let spec = OperatorSpec::parse_with(HYPERBOLIC, Profile::Default).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back = OperatorSpec::parse_with(&text, Profile::Strict).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.fingerprint(), spec.fingerprint());
        let strict = OperatorSpec::parse_with(HYPERBOLIC, Profile::Strict).unwrap();
        assert_ne!(strict.fingerprint(), spec.fingerprint());
        assert_eq!(strict.options.disc.tol, 1e-12);
    }

    #[test]
    fn option_overlay() {
        let text = r#"{"algebra": {"type": "disc"},
            "map": {"canonical": {"theta": 1.0, "p": [0, 0]}},
            "weight": {"terms": [{"exp": [1], "c": [1, 0]}]},
            "options": {"disc": {"rationality": "declare_irrational", "oracle": {"n": 64}}}}"#;
        let spec = OperatorSpec::parse_with(text, Profile::Loose).unwrap();
        assert_eq!(spec.options.disc.oracle.n, Some(64));
        assert_eq!(spec.options.disc.oracle.sample_grid, 2048);
        assert_eq!(spec.options.disc.tol, 1e-7);
        let doc = analyze(&spec).unwrap();
        assert_eq!(doc.report.case_tag, "Prop4.2");
    }

    #[test]
    fn schema_errors() {
        let bad_field = r#"{"algebra": {"type": "disc"}, "map": {"moebius": {"a": [1, 0], "b": [0, 0], "c": [0, 0]}},
            "weight": {"coeffs": [[1, 0]]}}"#;
        let e = OperatorSpec::parse_with(bad_field, Profile::Default).unwrap_err();
        assert!(matches!(&e, Error::Schema(m) if m.contains("map.moebius")), "{e}");
        assert_eq!(e.exit_code(), 3);
        let two_maps = r#"{"algebra": {"type": "disc"},
            "map": {"canonical": {"theta": 1.0, "p": [0, 0]}, "blaschke": {"zeros": [[0,0],[0,0]]}},
            "weight": {"coeffs": [[1, 0]]}}"#;
        assert!(matches!(OperatorSpec::parse_with(two_maps, Profile::Default), Err(Error::Schema(_))));
        let wrong = r#"{"algebra": {"type": "endomorphism"},
            "map": {"canonical": {"theta": 1.0, "p": [0, 0]}}, "weight": {"coeffs": [[1, 0]]}}"#;
        assert!(matches!(OperatorSpec::parse_with(wrong, Profile::Default), Err(Error::Schema(_))));
        let e = OperatorSpec::parse_with("{\"algebra\": ", Profile::Default).unwrap_err();
        assert!(matches!(&e, Error::Schema(m) if m.contains("line 1")), "{e}");
    }

    #[test]
    fn polydisc_and_endomorphism_specs() {
        let text = r#"{"algebra": {"type": "polydisc", "n": 2},
            "map": {"gammas_over_pi": [1.4142135623730951, 1.7320508075688772], "independence": "declared"},
            "weight": {"terms": [{"exp": [0, 0], "c": [6, 0]}, {"exp": [1, 0], "c": [1, 0]}, {"exp": [0, 1], "c": [1, 0]}]}}"#;
        let spec = OperatorSpec::parse_with(text, Profile::Default).unwrap();
        let doc = verify(&spec).unwrap();
        assert_eq!(doc.report.case_tag, "ExampleE3.1");
        assert!(doc.checks.iter().all(|c| c.is_ok()), "{:?}", doc.checks);

        let dep = text.replace("1.4142135623730951, 1.7320508075688772", "0.5, 0.3333333333333333").replace("declared", "check");
        let spec = OperatorSpec::parse_with(&dep, Profile::Default).unwrap();
        assert_eq!(analyze(&spec).unwrap_err().exit_code(), 2);

        let text = r#"{"algebra": {"type": "endomorphism"},
            "map": {"blaschke": {"zeros": [[0, 0], [0, 0]]}},
            "weight": {"coeffs": [[0.5, 0], [-0.5, 0]]}}"#;
        let spec = OperatorSpec::parse_with(text, Profile::Default).unwrap();
        let doc = verify(&spec).unwrap();
        assert!(doc.flagged());
        let again: ReportDocument = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_real(1.0 / 3.0), "1/3");
        assert_eq!(fmt_real(-3.0), "−3");
        assert_eq!(fmt_real(std::f64::consts::PI), "3.141593");
        assert_eq!(fmt_complex(Complex64::new(0.0, 1.0)), "i");
        assert_eq!(fmt_complex(Complex64::new(0.5, -2.0)), "1/2−2i");
    }
}
