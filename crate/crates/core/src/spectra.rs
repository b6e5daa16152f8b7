//! Spectra of `T = w·T_φ` on the disc algebra for disk automorphisms `φ`,
//! and the oracle cross-check of the resulting radii.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::cocycle::{disc_enclosures, OracleOptions, RadiusEnclosure};
use crate::error::Result;
use crate::moebius::{ClassifyOptions, MapClass, MoebiusMap, Rationality, DEFAULT_M_MAX, DEFAULT_TOL};
use crate::quadrature::{poisson_log_integral, LogIntegralResult};
use crate::region::{CocycleFn, PlaneRegion, SpectralSet, SpectrumEntry};
use crate::weight::{golden, Invertibility, InvertibilityKind, WeightPoly, DEFAULT_ROOT_TOL};

/// Case tag for inputs outside every supported case.
pub const NOT_COVERED: &str = "NotCoveredByPaper";

/// A circle root closer than this to a fixed point is taken to sit on it.
const SAME_POINT: f64 = 1e-6;
/// Circle roots in `(SAME_POINT, NEAR_MISS)` of a fixed point are too close
/// to decide which hypothesis applies.
const NEAR_MISS: f64 = 1e-4;
const EXTREMA_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algebra {
    Disc,
    Polydisc,
    Endomorphism,
}

/// How `rho` and `rho_min` were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusSource {
    ClosedForm,
    /// Bounds of a certified enclosure (`rho` upper, `rho_min` lower).
    Enclosure,
    Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectra {
    pub sigma: SpectrumEntry,
    pub sigma_ap: SpectrumEntry,
    pub sigma_usf: SpectrumEntry,
    pub sigma_lsf: SpectrumEntry,
    pub sigma_sf: SpectrumEntry,
    pub sigma_f: SpectrumEntry,
    pub sigma_w: SpectrumEntry,
}

impl Spectra {
    /// All seven spectra equal to `set`.
    pub fn uniform(set: SpectralSet) -> Self {
        let e = SpectrumEntry::exact(set);
        Self {
            sigma: e.clone(),
            sigma_ap: e.clone(),
            sigma_usf: e.clone(),
            sigma_lsf: e.clone(),
            sigma_sf: e.clone(),
            sigma_f: e.clone(),
            sigma_w: e,
        }
    }

    pub fn unknown(outer: Option<SpectralSet>) -> Self {
        let e = SpectrumEntry::Unknown { outer };
        Self {
            sigma: e.clone(),
            sigma_ap: e.clone(),
            sigma_usf: e.clone(),
            sigma_lsf: e.clone(),
            sigma_sf: e.clone(),
            sigma_f: e.clone(),
            sigma_w: e,
        }
    }

    pub fn entries(&self) -> [(&'static str, &SpectrumEntry); 7] {
        [
            ("sigma", &self.sigma),
            ("sigma_ap", &self.sigma_ap),
            ("sigma_usf", &self.sigma_usf),
            ("sigma_lsf", &self.sigma_lsf),
            ("sigma_sf", &self.sigma_sf),
            ("sigma_f", &self.sigma_f),
            ("sigma_w", &self.sigma_w),
        ]
    }
}

/// The Poisson integral at the interior fixed point next to the local
/// factor value `|w₁(z₀)|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonDiagnostics {
    pub z0: Complex64,
    pub integral: LogIntegralResult,
    pub exp_integral: f64,
    /// Order of vanishing of `w` at `z0`.
    pub zero_order: usize,
    pub w1_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub rho: RadiusEnclosure,
    pub rho_min: RadiusEnclosure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub algebra: Algebra,
    pub case_tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_class: Option<MapClass>,
    pub spectra: Spectra,
    pub rho: f64,
    pub rho_min: f64,
    pub radius_source: RadiusSource,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson: Option<PoissonDiagnostics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_integral: Option<LogIntegralResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    /// The other branch when the case split is numerically ambiguous.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternate: Option<Box<SpectrumReport>>,
    /// Comparisons against literature values, where any are known.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cited: Vec<CheckResult>,
}

impl SpectrumReport {
    pub(crate) fn new(case_tag: &str, class: MapClass, spectra: Spectra, rho: f64, rho_min: f64) -> Self {
        Self {
            algebra: Algebra::Disc,
            case_tag: case_tag.into(),
            map_class: Some(class),
            spectra,
            rho,
            rho_min,
            radius_source: RadiusSource::ClosedForm,
            notes: Vec::new(),
            poisson: None,
            torus_integral: None,
            oracle: None,
            alternate: None,
            cited: Vec::new(),
        }
    }

    pub fn is_covered(&self) -> bool {
        self.case_tag != NOT_COVERED
    }

    /// Report without a disk-automorphism class.
    pub(crate) fn bare(algebra: Algebra, case_tag: &str, spectra: Spectra, rho: f64, rho_min: f64) -> Self {
        let mut r = Self::new(case_tag, MapClass::Identity, spectra, rho, rho_min);
        r.algebra = algebra;
        r.map_class = None;
        r
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalyzeOptions {
    pub tol: f64,
    pub m_max: u32,
    pub rationality: Rationality,
    pub root_tol: f64,
    /// Relative band under which `|w(ζ₁)|` and `|w(ζ₂)|` count as equal.
    pub equal_rel_tol: f64,
    /// Relative differences below this (and above `equal_rel_tol`) get a
    /// dual report.
    pub dual_band: f64,
    pub quad_tol: f64,
    pub oracle: OracleOptions,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            m_max: DEFAULT_M_MAX,
            rationality: Rationality::Auto,
            root_tol: DEFAULT_ROOT_TOL,
            equal_rel_tol: 1e-9,
            dual_band: 1e-6,
            quad_tol: 1e-12,
            oracle: OracleOptions::default(),
        }
    }
}

impl AnalyzeOptions {
    pub fn classify(&self) -> ClassifyOptions {
        ClassifyOptions {
            tol: self.tol,
            m_max: self.m_max,
            rationality: self.rationality,
        }
    }
}

pub(crate) fn circ(r: f64) -> SpectralSet {
    if r == 0.0 {
        SpectralSet::Origin
    } else {
        SpectralSet::circle(r)
    }
}

pub(crate) fn disk(r: f64) -> SpectralSet {
    if r == 0.0 {
        SpectralSet::Origin
    } else {
        SpectralSet::disk(r)
    }
}

pub(crate) fn ann(r1: f64, r2: f64) -> SpectralSet {
    if r1.min(r2) == 0.0 {
        disk(r1.max(r2))
    } else {
        SpectralSet::annulus(r1, r2)
    }
}

fn two_circles(a: f64, b: f64) -> SpectralSet {
    SpectralSet::union(vec![circ(a), circ(b)])
}

fn exact(s: SpectralSet) -> SpectrumEntry {
    SpectrumEntry::exact(s)
}

fn at_least(inner: SpectralSet, outer: SpectralSet) -> SpectrumEntry {
    SpectrumEntry::ContainsAtLeast {
        inner,
        outer: Some(outer),
    }
}

/// Full report for `T = w·T_φ` with `φ` a disk automorphism.
pub fn analyze_disc(map: &MoebiusMap, w: &WeightPoly, opts: &AnalyzeOptions) -> Result<SpectrumReport> {
    let class = map.classify_with(&opts.classify())?;
    let inv = w.classify_invertibility(opts.root_tol)?;
    let mut report = match class {
        MapClass::Identity => rational_case(map, w, 1, class)?,
        MapClass::EllipticRational { m, .. } => rational_case(map, w, m, class)?,
        MapClass::EllipticIrrational { z0, .. } => irrational_case(w, z0, &inv, class, opts)?,
        MapClass::Parabolic { zeta } => {
            let rho = value_at(w, &inv, zeta);
            equal_values_case("Prop5", rho, &inv, class)
        }
        MapClass::Hyperbolic { zeta1, zeta2, .. } => hyperbolic_case(w, &inv, zeta1, zeta2, class, opts),
    };
    if report.case_tag == NOT_COVERED {
        fill_from_oracle(&mut report, map, w, &class, opts)?;
    }
    if !inv.borderline.is_empty() {
        report.note(format!(
            "{} weight root(s) lie within 10·root_tol of the unit circle; the case split depends on root_tol = {}",
            inv.borderline.len(),
            opts.root_tol
        ));
    }
    report.note("σ_r = σ \\ σ_ap");
    Ok(report)
}

/// `|w(ζ)|`, snapped to zero when a circle root sits on `ζ`.
fn value_at(w: &WeightPoly, inv: &Invertibility, zeta: Complex64) -> f64 {
    if inv.on_circle.iter().any(|r| (r.value - zeta).norm() <= SAME_POINT) {
        0.0
    } else {
        w.eval(zeta).norm()
    }
}

fn rational_case(map: &MoebiusMap, w: &WeightPoly, m: u32, class: MapClass) -> Result<SpectrumReport> {
    let f = CocycleFn::new(*map, w.clone(), m);
    let range = SpectralSet::RootPreimage {
        m,
        base: PlaneRegion::RangeOnDisk { f: f.clone() },
    };
    let curve = SpectralSet::RootPreimage {
        m,
        base: PlaneRegion::CurveImage { f: f.clone() },
    };
    let spectra = Spectra {
        sigma: exact(range.clone()),
        sigma_w: exact(range),
        sigma_ap: exact(curve.clone()),
        sigma_usf: exact(curve.clone()),
        sigma_f: exact(curve.clone()),
        sigma_lsf: SpectrumEntry::Unknown {
            outer: Some(curve.clone()),
        },
        sigma_sf: SpectrumEntry::Unknown { outer: Some(curve) },
    };
    let (lo, hi) = cocycle_circle_extrema(&f, EXTREMA_SAMPLES);
    let inv_m = 1.0 / m as f64;
    let tag = if matches!(class, MapClass::Identity) { "Prop1" } else { "Prop3" };
    let mut report = SpectrumReport::new(tag, class, spectra, hi.powf(inv_m), lo.powf(inv_m));
    report.note(format!("w_{m} evaluated by composition along the orbit"));
    report.note("σ_usf = σ_ap");
    report.note(format!(
        "ρ = (max_𝕋 |w_{m}|)^(1/{m}) and ρ_min = (min_𝕋 |w_{m}|)^(1/{m}) from a refined boundary grid"
    ));
    Ok(report)
}

/// `(min, max)` of `|f(e^{iθ})|`.
pub fn cocycle_circle_extrema(f: &CocycleFn, samples: usize) -> (f64, f64) {
    let h = TAU / samples as f64;
    let modulus = |t: f64| f.eval(Complex64::cis(t)).norm();
    let vals: Vec<f64> = (0..samples).map(|k| modulus(k as f64 * h)).collect();
    let (mut imin, mut imax) = (0, 0);
    for (k, &v) in vals.iter().enumerate() {
        if v < vals[imin] {
            imin = k;
        }
        if v > vals[imax] {
            imax = k;
        }
    }
    let (_, lo) = golden(modulus, (imin as f64 - 1.0) * h, (imin as f64 + 1.0) * h);
    let (_, neg) = golden(|t| -modulus(t), (imax as f64 - 1.0) * h, (imax as f64 + 1.0) * h);
    (lo.min(vals[imin]), (-neg).max(vals[imax]))
}

fn irrational_case(
    w: &WeightPoly,
    z0: Complex64,
    inv: &Invertibility,
    class: MapClass,
    opts: &AnalyzeOptions,
) -> Result<SpectrumReport> {
    let integral = poisson_log_integral(w, z0, opts.quad_tol)?;
    let rho = integral.value.exp();
    let (order, w1) = w.factor_at(z0);
    let diag = PoissonDiagnostics {
        z0,
        exp_integral: rho,
        zero_order: order,
        w1_abs: w1.norm(),
        integral,
    };
    let (tag, spectra, extra) = match inv.kind {
        InvertibilityKind::InvertibleInAlgebra => ("Prop4.1", Spectra::uniform(circ(rho)), None),
        InvertibilityKind::NonvanishingOnCircle => ("Prop4.2", disk_circle_split(rho), Some(())),
        InvertibilityKind::VanishesOnCircle => ("Prop4.3", Spectra::uniform(disk(rho)), None),
    };
    let mut report = SpectrumReport::new(tag, class, spectra, rho, rho);
    if extra.is_some() {
        split_notes(&mut report);
    }
    report.note(format!(
        "ρ = ρ_min = exp ∫ ln|w| P_z0 dθ/2π with z0 = {z0}; closed form {} vs quadrature {}",
        diag.integral.value,
        diag.integral.numeric_value.unwrap_or(f64::NAN)
    ));
    if order >= 1 {
        report.note(format!(
            "w has a zero of order {order} at z0: exp(integral) = {} while |w₁(z₀)| = {}; \
             they differ by (1 − r0²)^{order}. ρ is taken from the integral; the oracle check decides",
            diag.exp_integral, diag.w1_abs
        ));
    }
    for f in &diag.integral.flags {
        report.note(format!("quadrature: {f}"));
    }
    report.poisson = Some(diag);
    Ok(report)
}

/// `σ = σ_w = ρ𝔻`, everything else on `ρ𝕋`.
fn disk_circle_split(rho: f64) -> Spectra {
    let c = circ(rho);
    Spectra {
        sigma: exact(disk(rho)),
        sigma_w: exact(disk(rho)),
        sigma_f: exact(c.clone()),
        sigma_ap: exact(c.clone()),
        sigma_usf: exact(c.clone()),
        sigma_lsf: exact(c.clone()),
        sigma_sf: exact(c),
    }
}

fn split_notes(report: &mut SpectrumReport) {
    report.note("σ_ap = σ_usf = ρ𝕋 derived: ∂σ ⊆ σ_ap and σ_usf ⊆ σ_f = ρ𝕋; only σ, σ_w and σ_f are stated");
    report.note("σ_sf and σ_lsf = ρ𝕋 inferred from σ_sf ⊆ σ_usf; not stated");
}

/// Parabolic maps and hyperbolic maps with `|w(ζ₁)| = |w(ζ₂)|`.
fn equal_values_case(prefix: &str, rho: f64, inv: &Invertibility, class: MapClass) -> SpectrumReport {
    let (item, spectra) = if rho == 0.0 {
        (3, Spectra::uniform(SpectralSet::Origin))
    } else {
        match inv.kind {
            InvertibilityKind::InvertibleInAlgebra => (1, Spectra::uniform(circ(rho))),
            InvertibilityKind::NonvanishingOnCircle => (2, disk_circle_split(rho)),
            InvertibilityKind::VanishesOnCircle => (4, Spectra::uniform(disk(rho))),
        }
    };
    let mut report = SpectrumReport::new(&format!("{prefix}.{item}"), class, spectra, rho, rho);
    if item == 2 {
        split_notes(&mut report);
    }
    report
}

#[derive(Clone, Copy, PartialEq)]
enum Order {
    Less,
    Equal,
    Greater,
}

fn hyperbolic_case(
    w: &WeightPoly,
    inv: &Invertibility,
    zeta1: Complex64,
    zeta2: Complex64,
    class: MapClass,
    opts: &AnalyzeOptions,
) -> SpectrumReport {
    let a = value_at(w, inv, zeta1);
    let b = value_at(w, inv, zeta2);
    let scale = a.max(b);
    let rel = if scale == 0.0 { 0.0 } else { (a - b).abs() / scale };
    let strict = if a < b { Order::Less } else { Order::Greater };

    let near_miss = inv.on_circle.iter().any(|r| {
        [zeta1, zeta2].iter().any(|z| {
            let d = (r.value - z).norm();
            d > SAME_POINT && d < NEAR_MISS
        })
    });
    if near_miss {
        let mut r = SpectrumReport::new(NOT_COVERED, class, Spectra::unknown(None), b.max(a), a.min(b));
        r.note(format!(
            "a circle root lies within {NEAR_MISS:e} of a fixed point without coinciding with it; \
             which hypothesis applies cannot be decided"
        ));
        return r;
    }

    let order = if rel <= opts.equal_rel_tol { Order::Equal } else { strict };
    let mut report = hyperbolic_branch(order, a, b, inv, zeta1, zeta2, class);
    if order != Order::Equal && rel < opts.dual_band {
        let alt = hyperbolic_branch(Order::Equal, a.max(b), a.max(b), inv, zeta1, zeta2, class);
        report.note(format!(
            "|w(ζ₁)| = {a} and |w(ζ₂)| = {b} differ by relative {rel:e}, inside the ambiguity band \
             ({:e}, {:e}); the equal-value branch is attached as alternate",
            opts.equal_rel_tol, opts.dual_band
        ));
        report.alternate = Some(Box::new(alt));
    }
    report.note(format!("|w(ζ₁)| = {a} at ζ₁ = {zeta1}, |w(ζ₂)| = {b} at ζ₂ = {zeta2}"));
    report
}

fn hyperbolic_branch(
    order: Order,
    a: f64,
    b: f64,
    inv: &Invertibility,
    zeta1: Complex64,
    zeta2: Complex64,
    class: MapClass,
) -> SpectrumReport {
    let on_zeta = |z: Complex64| move |r: &&crate::roots::Root| (r.value - z).norm() <= SAME_POINT;
    let roots_off_zeta1 = inv.on_circle.iter().filter(|r| !on_zeta(zeta1)(r)).count();
    let invertible = inv.kind == InvertibilityKind::InvertibleInAlgebra;
    match order {
        Order::Equal => equal_values_case("Prop6", a.max(b), inv, class),
        Order::Less => {
            let circles = two_circles(a, b);
            let annulus = ann(a, b);
            if invertible {
                let mut r = SpectrumReport::new(
                    "Prop7.1",
                    class,
                    Spectra {
                        sigma: exact(annulus.clone()),
                        sigma_lsf: exact(annulus.clone()),
                        sigma_f: exact(annulus.clone()),
                        sigma_w: exact(annulus),
                        sigma_sf: exact(circles.clone()),
                        sigma_ap: exact(circles.clone()),
                        sigma_usf: exact(circles),
                    },
                    b,
                    a,
                );
                r.note("σ_w fixed by σ_f ⊆ σ_w ⊆ σ");
                r.note("σ_ap = σ_usf = the two circles: the open annulus is the residual spectrum");
                r
            } else if roots_off_zeta1 == 0 {
                SpectrumReport::new(
                    "Prop7.2",
                    class,
                    Spectra {
                        sigma: exact(disk(b)),
                        sigma_w: exact(disk(b)),
                        sigma_lsf: exact(annulus.clone()),
                        sigma_f: exact(annulus),
                        sigma_sf: exact(circles.clone()),
                        sigma_usf: exact(circles.clone()),
                        sigma_ap: exact(circles),
                    },
                    b,
                    a,
                )
            } else {
                let sf = SpectralSet::union(vec![disk(a), circ(b)]);
                let mut r = SpectrumReport::new(
                    "Prop7.3",
                    class,
                    Spectra {
                        sigma: exact(disk(b)),
                        sigma_f: exact(disk(b)),
                        sigma_w: exact(disk(b)),
                        sigma_lsf: exact(annulus),
                        sigma_sf: exact(sf.clone()),
                        sigma_usf: exact(sf.clone()),
                        sigma_ap: exact(sf),
                    },
                    b,
                    a,
                );
                r.note("σ_w fixed by σ_f ⊆ σ_w ⊆ σ");
                if a > 0.0 {
                    r.note(format!(
                        "stated σ_sf ⊇ {{|λ| < {a}}} is not contained in stated σ_lsf = {{{a} ≤ |λ| ≤ {b}}}; \
                         both reproduced as stated"
                    ));
                }
                r
            }
        }
        Order::Greater => {
            // ρ and ρ_min are max and min of the fixed-point values.
            let circles = two_circles(a, b);
            let annulus = ann(b, a);
            let lsf = |outer: SpectralSet| at_least(circles.clone(), outer);
            let (tag, spectra) = if invertible {
                (
                    "Prop8.1",
                    Spectra {
                        sigma: exact(annulus.clone()),
                        sigma_ap: exact(annulus.clone()),
                        sigma_usf: exact(annulus.clone()),
                        sigma_f: exact(annulus.clone()),
                        sigma_w: exact(annulus.clone()),
                        sigma_lsf: lsf(annulus.clone()),
                        sigma_sf: at_least(circles.clone(), annulus),
                    },
                )
            } else if inv.on_circle.is_empty() {
                (
                    "Prop8.2",
                    Spectra {
                        sigma: exact(disk(a)),
                        sigma_w: exact(disk(a)),
                        sigma_ap: exact(annulus.clone()),
                        sigma_usf: exact(annulus.clone()),
                        sigma_f: at_least(annulus.clone(), disk(a)),
                        sigma_lsf: lsf(disk(a)),
                        sigma_sf: at_least(circles.clone(), annulus),
                    },
                )
            } else if roots_off_zeta1 > 0 {
                (
                    "Prop8.3",
                    Spectra {
                        sigma: exact(disk(a)),
                        sigma_f: exact(disk(a)),
                        sigma_w: exact(disk(a)),
                        sigma_ap: exact(annulus.clone()),
                        sigma_usf: exact(annulus.clone()),
                        sigma_lsf: lsf(disk(a)),
                        sigma_sf: at_least(circles.clone(), annulus),
                    },
                )
            } else {
                (NOT_COVERED, Spectra::unknown(None))
            };
            let mut r = SpectrumReport::new(tag, class, spectra, a, b);
            if tag != NOT_COVERED {
                r.note(
                    "Prop8 header assigns ρ = |w(ζ₂)| and ρ_min = |w(ζ₁)|; item (1) gives σ = {|w(ζ₂)| ≤ |λ| ≤ |w(ζ₁)|}, \
                     so ρ = max and ρ_min = min of the two values are reported",
                );
                r.note("σ_usf = σ_ap stated with a half-open outer edge; the closed annulus is reported");
                r.note("σ_lsf: only the two circles are known to belong; membership strictly inside the annulus is unknown");
                if tag == "Prop8.3" && inv.on_circle.iter().all(|x| on_zeta(zeta2)(&x)) {
                    r.note("the Prop8.2 hypotheses hold as well; the Prop8.3 sets refine them");
                }
                if tag == "Prop8.1" {
                    r.note("σ_f and σ_w fixed by σ_usf ⊆ σ_f ⊆ σ_w ⊆ σ");
                }
            }
            r
        }
    }
}

/// Unknown spectra with oracle-backed radii.
fn fill_from_oracle(
    report: &mut SpectrumReport,
    map: &MoebiusMap,
    w: &WeightPoly,
    class: &MapClass,
    opts: &AnalyzeOptions,
) -> Result<()> {
    let (rho, rho_min) = disc_enclosures(map, class, w, &opts.oracle)?;
    report.rho = rho.upper;
    report.rho_min = rho_min.lower;
    report.radius_source = RadiusSource::Enclosure;
    report.spectra = Spectra::unknown(Some(disk(rho.upper)));
    report.oracle = Some(OracleSummary { rho, rho_min });
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "OK")]
    Ok,
    #[serde(rename = "FLAG")]
    Flag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub closed_form: f64,
    pub oracle_interval: [f64; 2],
    pub verdict: Verdict,
    pub detail: String,
}

impl CheckResult {
    pub fn against(name: &str, value: f64, enc: &RadiusEnclosure, tol: f64) -> Self {
        let ok = enc.contains(value, tol);
        Self {
            name: name.into(),
            closed_form: value,
            oracle_interval: [enc.lower, enc.upper],
            verdict: if ok { Verdict::Ok } else { Verdict::Flag },
            detail: format!("tolerance {tol:e}; {}", enc.witnesses.join("; ")),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.verdict == Verdict::Ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub checks: Vec<CheckResult>,
    pub oracle: OracleSummary,
}

/// Agreement tolerance for the oracle at its default lengths.
pub fn check_tolerance(class: &MapClass) -> f64 {
    match class {
        MapClass::Identity | MapClass::EllipticRational { .. } => 1e-6,
        MapClass::EllipticIrrational { .. } => 1e-2,
        MapClass::Parabolic { .. } => 5e-2,
        MapClass::Hyperbolic { .. } => 1e-3,
    }
}

/// Run the cocycle oracle and compare every radius in `report`.
pub fn verify_report(
    report: &SpectrumReport,
    map: &MoebiusMap,
    w: &WeightPoly,
    opts: &OracleOptions,
) -> Result<Verification> {
    let class = match report.map_class {
        Some(c) => c,
        None => map.classify(DEFAULT_TOL, DEFAULT_M_MAX)?,
    };
    let (rho, rho_min) = match &report.oracle {
        Some(o) if report.radius_source == RadiusSource::Enclosure => (o.rho.clone(), o.rho_min.clone()),
        _ => disc_enclosures(map, &class, w, opts)?,
    };
    let tol = check_tolerance(&class);
    let mut checks = Vec::new();
    if report.radius_source == RadiusSource::ClosedForm {
        checks.push(CheckResult::against("rho", report.rho, &rho, tol));
        checks.push(CheckResult::against("rho_min", report.rho_min, &rho_min, tol));
        if let Some(SpectralSet::Annulus { r1, r2 }) = report.spectra.sigma.exact_set() {
            checks.push(CheckResult::against("sigma_inner_radius", *r1, &rho_min, tol));
            checks.push(CheckResult::against("sigma_outer_radius", *r2, &rho, tol));
        }
    }
    if let Some(p) = &report.poisson {
        let numeric = p.integral.numeric_value.unwrap_or(f64::NAN);
        let limit = if p.integral.singular_part != 0.0 { 1e-9 } else { 1e-10 };
        let ok = (numeric - p.integral.value).abs() <= limit;
        checks.push(CheckResult {
            name: "poisson_quadrature".into(),
            closed_form: p.integral.value,
            oracle_interval: [numeric, numeric],
            verdict: if ok { Verdict::Ok } else { Verdict::Flag },
            detail: format!("closed form vs adaptive Gauss–Legendre, limit {limit:e}"),
        });
        if p.zero_order >= 1 {
            let mut c = CheckResult::against("w1_at_fixed_point", p.w1_abs, &rho, tol);
            c.detail = format!("|w₁(z₀)| against the ρ enclosure; {}", c.detail);
            checks.push(c);
        }
    }
    Ok(Verification {
        checks,
        oracle: OracleSummary { rho, rho_min },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::Membership;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hyperbolic() -> MoebiusMap {
        MoebiusMap::new(c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap()
    }

    fn parabolic() -> MoebiusMap {
        MoebiusMap::new(c(-1.0, 2.0), c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 2.0)).unwrap()
    }

    fn w(coeffs: &[f64]) -> WeightPoly {
        WeightPoly::from_real(coeffs).unwrap()
    }

    #[test]
    fn hyperbolic_invertible() {
        let r = analyze_disc(&hyperbolic(), &w(&[-2.0, 1.0]), &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.case_tag, "Prop7.1");
        assert_eq!(r.spectra.sigma.exact_set(), Some(&SpectralSet::annulus(1.0, 3.0)));
        let sf = r.spectra.sigma_sf.exact_set().unwrap();
        assert_eq!(sf.membership(c(0.0, 3.0), 1e-9), Membership::In);
        assert_eq!(sf.membership(c(2.0, 0.0), 1e-9), Membership::Out);
        assert!((r.rho - 3.0).abs() < 1e-12 && (r.rho_min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parabolic_invertible() {
        let r = analyze_disc(&parabolic(), &w(&[-2.0, 1.0]), &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.case_tag, "Prop5.1");
        for (_, e) in r.spectra.entries() {
            assert_eq!(e.exact_set(), Some(&SpectralSet::circle(1.0)));
        }
    }

    #[test]
    fn parabolic_subcases() {
        let opts = AnalyzeOptions::default();
        // w(1) = 0.
        let r = analyze_disc(&parabolic(), &w(&[0.5, -0.5]), &opts).unwrap();
        assert_eq!(r.case_tag, "Prop5.3");
        // Root inside only.
        let r = analyze_disc(&parabolic(), &w(&[0.0, 1.0]), &opts).unwrap();
        assert_eq!(r.case_tag, "Prop5.2");
        assert_eq!(r.spectra.sigma.exact_set(), Some(&SpectralSet::disk(1.0)));
        // Zero at −1, |w(1)| = 1.
        let r = analyze_disc(&parabolic(), &w(&[0.5, 0.5]), &opts).unwrap();
        assert_eq!(r.case_tag, "Prop5.4");
    }

    #[test]
    fn rational_rotation() {
        let flip = MoebiusMap::rotation(std::f64::consts::PI);
        let r = analyze_disc(&flip, &w(&[0.0, 1.0]), &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.case_tag, "Prop3");
        let l = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert_eq!(r.spectra.sigma_ap.membership(l, 1e-9), Membership::In);
        assert_eq!(r.spectra.sigma_ap.membership(0.5 * l, 1e-9), Membership::Out);
        assert_eq!(r.spectra.sigma.membership(0.5 * l, 1e-9), Membership::In);
        assert!((r.rho - 1.0).abs() < 1e-12);
    }

    #[test]
    fn irrational_with_zero_at_fixed_point() {
        let map = MoebiusMap::elliptic(c(0.5, 0.0), std::f64::consts::SQRT_2 * std::f64::consts::PI);
        let opts = AnalyzeOptions {
            rationality: Rationality::DeclareIrrational,
            ..AnalyzeOptions::default()
        };
        let r = analyze_disc(&map, &w(&[-0.5, 1.0]), &opts).unwrap();
        assert_eq!(r.case_tag, "Prop4.2");
        let p = r.poisson.as_ref().unwrap();
        assert!((p.exp_integral - 0.75).abs() < 1e-12);
        assert!((p.w1_abs - 1.0).abs() < 1e-12);
        assert_eq!(p.zero_order, 1);
    }

    #[test]
    fn hyperbolic_prop8_and_dual_band() {
        // |w(1)| = 3 > |w(−1)| = 1.
        let r = analyze_disc(&hyperbolic(), &w(&[2.0, 1.0]), &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.case_tag, "Prop8.1");
        assert_eq!(r.rho, 3.0);
        assert_eq!(r.rho_min, 1.0);
        assert_eq!(r.spectra.sigma_lsf.membership(c(2.0, 0.0), 1e-9), Membership::Unknown);
        assert_eq!(r.spectra.sigma_lsf.membership(c(3.0, 0.0), 1e-9), Membership::In);
        // w = 1 + εz: |w(1)| and |w(−1)| differ by about 2ε.
        let r = analyze_disc(&hyperbolic(), &w(&[1.0, 1e-7]), &AnalyzeOptions::default()).unwrap();
        assert!(r.alternate.is_some());
        assert_eq!(r.alternate.unwrap().case_tag, "Prop6.1");
        let r = analyze_disc(&hyperbolic(), &w(&[1.0, 1e-12]), &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.case_tag, "Prop6.1");
    }

    #[test]
    fn verify_hyperbolic() {
        let map = hyperbolic();
        let weight = w(&[-2.0, 1.0]);
        let r = analyze_disc(&map, &weight, &AnalyzeOptions::default()).unwrap();
        let v = verify_report(&r, &map, &weight, &OracleOptions::default()).unwrap();
        assert!(v.checks.iter().all(|c| c.is_ok()), "{:#?}", v.checks);
        assert_eq!(v.checks.len(), 4);
    }

    #[test]
    fn verify_constant() {
        let weight = WeightPoly::constant(c(0.0, 1.5)).unwrap();
        for map in [hyperbolic(), parabolic(), MoebiusMap::rotation(1.0)] {
            let opts = AnalyzeOptions {
                rationality: Rationality::DeclareIrrational,
                oracle: OracleOptions {
                    n: Some(64),
                    ..OracleOptions::default()
                },
                ..AnalyzeOptions::default()
            };
            let r = analyze_disc(&map, &weight, &opts).unwrap();
            assert!((r.rho - 1.5).abs() < 1e-12, "{}", r.case_tag);
            let v = verify_report(&r, &map, &weight, &opts.oracle).unwrap();
            for ch in v.checks.iter().filter(|ch| ch.name.starts_with("rho")) {
                assert!(ch.is_ok());
                assert!((ch.oracle_interval[0] - 1.5).abs() < 1e-12 && (ch.oracle_interval[1] - 1.5).abs() < 1e-12, "{} {:?}", r.case_tag, ch);
            }
        }
    }

    #[test]
    fn report_round_trip() {
        let r = analyze_disc(&hyperbolic(), &w(&[2.0, 1.0]), &AnalyzeOptions::default()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: SpectrumReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
