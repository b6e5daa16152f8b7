//! Weighted torus-rotation operators on the polydisc algebra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{torus_gauss, torus_log_integral, IntegralMethod};
use crate::spectra::{circ, disk, Algebra, RadiusSource, Spectra, SpectrumReport, NOT_COVERED};
use crate::region::SpectrumEntry;

/// One monomial `c · z^exp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exp: Vec<u32>,
    pub c: Complex64,
}

/// Sparse polynomial in `n` variables. Like terms are merged and zero terms
/// dropped on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightPolyNRaw", into = "WeightPolyNRaw")]
pub struct WeightPolyN {
    dim: usize,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct WeightPolyNRaw {
    terms: Vec<Term>,
}

impl TryFrom<WeightPolyNRaw> for WeightPolyN {
    type Error = Error;
    fn try_from(raw: WeightPolyNRaw) -> Result<Self> {
        let dim = raw.terms.first().map(|t| t.exp.len()).unwrap_or(0);
        Self::new(dim, raw.terms)
    }
}

impl From<WeightPolyN> for WeightPolyNRaw {
    fn from(w: WeightPolyN) -> Self {
        Self { terms: w.terms }
    }
}

impl WeightPolyN {
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("polydisc dimension must be at least 1".into()));
        }
        let mut merged: Vec<Term> = Vec::new();
        for t in terms {
            if t.exp.len() != dim {
                return Err(Error::Invalid(format!(
                    "exponent {:?} has {} entries, expected {dim}",
                    t.exp,
                    t.exp.len()
                )));
            }
            if !t.c.is_finite() {
                return Err(Error::Invalid("non-finite weight coefficient".into()));
            }
            match merged.iter_mut().find(|m| m.exp == t.exp) {
                Some(m) => m.c += t.c,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.c.norm() > 0.0);
        if merged.is_empty() {
            return Err(Error::ZeroWeight);
        }
        merged.sort_by(|a, b| a.exp.iter().sum::<u32>().cmp(&b.exp.iter().sum::<u32>()).then(a.exp.cmp(&b.exp)));
        Ok(Self { dim, terms: merged })
    }

    pub fn from_terms(dim: usize, terms: &[(Vec<u32>, Complex64)]) -> Result<Self> {
        Self::new(
            dim,
            terms.iter().map(|(e, c)| Term { exp: e.clone(), c: *c }).collect(),
        )
    }

    /// Re-embed in `dim ≥ self.dim()` variables.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::Invalid(format!("cannot embed {} variables into {dim}", self.dim)));
        }
        Self::new(
            dim,
            self.terms
                .iter()
                .map(|t| {
                    let mut exp = t.exp.clone();
                    exp.resize(dim, 0);
                    Term { exp, c: t.c }
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn constant_term(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.exp.iter().all(|&e| e == 0))
            .map(|t| t.c)
            .unwrap_or_default()
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        match self.terms.as_slice() {
            [t] if t.exp.iter().all(|&e| e == 0) => Some(t.c),
            _ => None,
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                t.exp
                    .iter()
                    .zip(z)
                    .fold(t.c, |acc, (&e, &zj)| if e == 0 { acc } else { acc * zj.powu(e) })
            })
            .sum()
    }

    /// `|c₀| − Σ_{other} |c|`; positive means `w` has no zeros on the closed
    /// polydisc.
    pub fn dominance_margin(&self) -> f64 {
        let c0 = self.constant_term().norm();
        let rest: f64 = self
            .terms
            .iter()
            .filter(|t| t.exp.iter().any(|&e| e > 0))
            .map(|t| t.c.norm())
            .sum();
        c0 - rest
    }
}

/// What is known about rational independence of the rotation angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IndependenceClaim {
    /// Asserted by the caller; not checked.
    Declared,
    /// Check relations with coefficients up to `q_max` before analysis.
    CheckedUpTo { q_max: u32 },
    #[default]
    Unknown,
}

/// `(z₁, …, z_n) ↦ (α₁ z₁, …, α_n z_n)` with `α_j = e^{iγ_j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusRotation {
    /// Angles `γ_j` in radians.
    pub gammas: Vec<f64>,
    #[serde(default)]
    pub independence: IndependenceClaim,
}

impl TorusRotation {
    pub fn new(gammas: Vec<f64>, independence: IndependenceClaim) -> Result<Self> {
        if gammas.is_empty() || gammas.len() > 4 {
            return Err(Error::Unsupported(format!("{} rotation angles (supported: 1 to 4)", gammas.len())));
        }
        if gammas.iter().any(|g| !g.is_finite()) {
            return Err(Error::Invalid("non-finite rotation angle".into()));
        }
        Ok(Self { gammas, independence })
    }

    pub fn from_gammas_over_pi(g: &[f64], independence: IndependenceClaim) -> Result<Self> {
        Self::new(g.iter().map(|x| x * std::f64::consts::PI).collect(), independence)
    }

    pub fn dim(&self) -> usize {
        self.gammas.len()
    }

    pub fn alphas(&self) -> Vec<Complex64> {
        self.gammas.iter().map(|&g| Complex64::cis(g)).collect()
    }

    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        z.iter().zip(self.alphas()).map(|(z, a)| z * a).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Independence {
    Declared,
    /// No relation with coefficients up to `q_max`; larger ones not excluded.
    Independent { q_max: u32 },
    /// `Σ k_j γ_j ∈ 2πℤ`.
    DependentWitness { k: Vec<i64> },
}

const RELATION_TOL: f64 = 1e-9;

/// Exhaustive search for `Σ k_j γ_j ∈ 2πℤ` with `0 < max |k_j| ≤ q_max`,
/// by increasing `Σ |k_j|`, sign normalised so the first nonzero entry is
/// positive.
pub fn check_independence(rot: &TorusRotation, q_max: u32) -> Independence {
    if rot.independence == IndependenceClaim::Declared {
        return Independence::Declared;
    }
    let n = rot.dim();
    let q = q_max.max(1) as i64;
    let mut best: Option<(i64, Vec<i64>)> = None;
    let side = (2 * q + 1) as usize;
    let total = side.pow(n as u32);
    for idx in 0..total {
        let mut rest = idx;
        let k: Vec<i64> = (0..n)
            .map(|_| {
                let v = (rest % side) as i64 - q;
                rest /= side;
                v
            })
            .collect();
        let first = k.iter().copied().find(|&v| v != 0);
        if first.is_none_or(|v| v < 0) {
            continue;
        }
        let s: f64 = k.iter().zip(&rot.gammas).map(|(&kj, g)| kj as f64 * g).sum();
        let scale: f64 = 1.0 + k.iter().zip(&rot.gammas).map(|(&kj, g)| (kj as f64 * g).abs()).sum::<f64>();
        let r = s - std::f64::consts::TAU * (s / std::f64::consts::TAU).round();
        if r.abs() > RELATION_TOL * scale {
            continue;
        }
        let l1: i64 = k.iter().map(|v| v.abs()).sum();
        let better = match &best {
            None => true,
            Some((b, bk)) => l1 < *b || (l1 == *b && k > *bk),
        };
        if better {
            best = Some((l1, k));
        }
    }
    match best {
        Some((_, k)) => Independence::DependentWitness { k },
        None => Independence::Independent { q_max },
    }
}

/// Where nonvanishing is to be certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Torus,
    ClosedPolydisc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Nonvanishing {
    /// `|w| ≥ min_lower > 0` on the whole domain.
    Certified { min_lower: f64, cells: usize },
    /// `|w(point)| ≤ value`, below the zero threshold.
    ZeroFound { point: Vec<Complex64>, value: f64 },
    Undecided { cells: usize },
}

/// Relative threshold under which a sampled `|w|` counts as a zero.
const ZERO_REL: f64 = 1e-8;
const MIN_CELL: f64 = 1e-11;

#[derive(Clone)]
struct PolarCell {
    /// Per variable `(r_lo, r_hi, t_lo, t_hi)`.
    b: Vec<[f64; 4]>,
}

/// Subdivision over polar boxes with the bound
/// `|w(z) − w(z_c)| ≤ Σ_j L_j (Δr_j/2 + r_hi Δθ_j/2)`, `L_j = Σ e_j |c|`.
pub fn certify_nonvanishing(w: &WeightPolyN, domain: Domain, budget: usize) -> Nonvanishing {
    let n = w.dim();
    let lips: Vec<f64> = (0..n)
        .map(|j| w.terms().iter().map(|t| t.exp[j] as f64 * t.c.norm()).sum())
        .collect();
    let scale: f64 = w.terms().iter().map(|t| t.c.norm()).sum();
    let r0 = if domain == Domain::Torus { 1.0 } else { 0.0 };
    const START: usize = 8;
    let h = std::f64::consts::TAU / START as f64;
    let mut stack: Vec<PolarCell> = (0..START.pow(n as u32))
        .map(|idx| {
            let mut rest = idx;
            let b = (0..n)
                .map(|_| {
                    let k = rest % START;
                    rest /= START;
                    [r0, 1.0, k as f64 * h, (k + 1) as f64 * h]
                })
                .collect();
            PolarCell { b }
        })
        .collect();
    let mut cells = 0usize;
    let mut min_lower = f64::INFINITY;
    let mut undecided = false;
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    while let Some(cell) = stack.pop() {
        cells += 1;
        if cells > budget {
            return Nonvanishing::Undecided { cells };
        }
        let mut spread = 0.0;
        let mut worst = (0usize, 0.0f64, false);
        for (j, bj) in cell.b.iter().enumerate() {
            let [rl, rh, tl, th] = *bj;
            z[j] = Complex64::from_polar(0.5 * (rl + rh), 0.5 * (tl + th));
            let dr = lips[j] * 0.5 * (rh - rl);
            let dt = lips[j] * 0.5 * rh * (th - tl);
            spread += dr + dt;
            if dr > worst.1 {
                worst = (j, dr, true);
            }
            if dt > worst.1 {
                worst = (j, dt, false);
            }
        }
        let v = w.eval(&z).norm();
        if v > spread {
            min_lower = min_lower.min(v - spread);
            continue;
        }
        if v <= ZERO_REL * scale {
            return Nonvanishing::ZeroFound { point: z, value: v };
        }
        let (j, size, radial) = worst;
        if size < MIN_CELL * scale.max(1.0) {
            undecided = true;
            continue;
        }
        let mut a = cell.clone();
        let mut b = cell;
        let (lo, hi) = if radial { (0, 1) } else { (2, 3) };
        let mid = 0.5 * (a.b[j][lo] + a.b[j][hi]);
        a.b[j][hi] = mid;
        b.b[j][lo] = mid;
        stack.push(b);
        stack.push(a);
    }
    if undecided {
        Nonvanishing::Undecided { cells }
    } else {
        Nonvanishing::Certified { min_lower, cells }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PolydiscOptions {
    pub q_max: u32,
    pub integral_tol: f64,
    /// Quadrature point budget.
    pub budget: usize,
    /// Subdivision cell budget for nonvanishing certificates.
    pub cell_budget: usize,
}

impl Default for PolydiscOptions {
    fn default() -> Self {
        Self {
            q_max: 4,
            integral_tol: 1e-9,
            budget: 1 << 22,
            cell_budget: 1 << 18,
        }
    }
}

fn example_tag(item: u32) -> String {
    format!("ExampleE3.{item}")
}

/// Spectra of `w·T_φ` on the polydisc algebra, `φ` a torus rotation with
/// rationally independent angles.
pub fn analyze_polydisc(rot: &TorusRotation, w: &WeightPolyN, opts: &PolydiscOptions) -> Result<SpectrumReport> {
    let n = rot.dim();
    let w = match w.dim() {
        d if d == n => w.clone(),
        d if d < n => w.embed(n)?,
        d => {
            return Err(Error::Invalid(format!("weight has {d} variables but the rotation has {n}")));
        }
    };
    let q_max = match rot.independence {
        IndependenceClaim::CheckedUpTo { q_max } => q_max,
        _ => opts.q_max,
    };
    let independence = check_independence(rot, q_max);
    if let Independence::DependentWitness { k } = &independence {
        return Err(Error::Hypothesis(format!(
            "rotation angles are rationally dependent: Σ k_j γ_j ∈ 2πℤ for k = {k:?}"
        )));
    }

    let w0 = w.constant_term().norm();
    let mut notes = vec![match &independence {
        Independence::Declared => "angle independence declared by the caller".to_string(),
        Independence::Independent { q_max } => {
            format!("no integer relation among the angles with coefficients up to {q_max}")
        }
        Independence::DependentWitness { .. } => unreachable!(),
    }];

    let margin = w.dominance_margin();
    let case = if margin > 0.0 {
        notes.push(format!("invertible on the closed polydisc: coefficient dominance margin {margin}"));
        1
    } else {
        match certify_nonvanishing(&w, Domain::Torus, opts.cell_budget) {
            Nonvanishing::ZeroFound { point, value } => {
                notes.push(format!("|w| = {value:e} at torus point {point:?}"));
                3
            }
            Nonvanishing::Undecided { cells } => {
                notes.push(format!("nonvanishing on the torus not decided after {cells} cells"));
                0
            }
            Nonvanishing::Certified { min_lower, .. } => {
                notes.push(format!("|w| ≥ {min_lower:e} on the torus (certified subdivision)"));
                match certify_nonvanishing(&w, Domain::ClosedPolydisc, opts.cell_budget) {
                    Nonvanishing::Certified { min_lower, .. } => {
                        notes.push(format!("|w| ≥ {min_lower:e} on the closed polydisc (certified subdivision)"));
                        1
                    }
                    Nonvanishing::ZeroFound { point, value } => {
                        notes.push(format!("|w| = {value:e} at interior point {point:?}"));
                        2
                    }
                    Nonvanishing::Undecided { cells } => {
                        notes.push(format!("invertibility on the polydisc not decided after {cells} cells"));
                        0
                    }
                }
            }
        }
    };

    let integral = if case == 1 || case == 2 {
        torus_gauss(&w, opts.integral_tol, opts.budget)?
    } else {
        torus_log_integral(&w, opts.integral_tol, opts.budget)?
    };
    let rho_int = integral.value.exp();
    let mut report = match case {
        1 => {
            let c = circ(w0);
            let mut r = SpectrumReport::bare(
                Algebra::Polydisc,
                &example_tag(1),
                Spectra {
                    sigma: SpectrumEntry::exact(c.clone()),
                    sigma_f: SpectrumEntry::exact(c.clone()),
                    sigma_w: SpectrumEntry::exact(c.clone()),
                    sigma_ap: SpectrumEntry::exact(c.clone()),
                    sigma_usf: SpectrumEntry::exact(c.clone()),
                    sigma_lsf: SpectrumEntry::Unknown { outer: Some(c.clone()) },
                    sigma_sf: SpectrumEntry::Unknown { outer: Some(c) },
                },
                w0,
                w0,
            );
            r.note("σ_w fixed by σ_f ⊆ σ_w ⊆ σ; σ_ap = σ_usf = σ since ∂σ ⊆ σ_ap");
            let gap = (rho_int - w0).abs();
            if gap <= 1e-6 * w0.max(1.0) {
                r.note(format!("exp ∫ ln|w| dm = {rho_int} agrees with |w(0)| (difference {gap:e})"));
            } else {
                r.note(format!("exp ∫ ln|w| dm = {rho_int} differs from |w(0)| = {w0} by {gap:e}"));
            }
            r
        }
        2 => {
            let d = disk(rho_int);
            let mut r = SpectrumReport::bare(
                Algebra::Polydisc,
                &example_tag(2),
                Spectra {
                    sigma: SpectrumEntry::exact(d.clone()),
                    sigma_usf: SpectrumEntry::exact(d.clone()),
                    sigma_ap: SpectrumEntry::exact(d.clone()),
                    sigma_f: SpectrumEntry::exact(d.clone()),
                    sigma_w: SpectrumEntry::exact(d.clone()),
                    sigma_lsf: SpectrumEntry::Unknown { outer: Some(d.clone()) },
                    sigma_sf: SpectrumEntry::Unknown { outer: Some(d) },
                },
                rho_int,
                rho_int,
            );
            r.note("σ_f and σ_w fixed by σ_usf ⊆ σ_f ⊆ σ_w ⊆ σ; not stated");
            r
        }
        3 => {
            let mut r =
                SpectrumReport::bare(Algebra::Polydisc, &example_tag(3), Spectra::uniform(disk(rho_int)), rho_int, rho_int);
            r.note("all seven spectra equal σ since σ_sf = σ");
            r
        }
        _ => SpectrumReport::bare(Algebra::Polydisc, NOT_COVERED, Spectra::unknown(None), rho_int, rho_int),
    };
    if case != 1 {
        report.note("ρ = exp ∫_{𝕋ⁿ} ln|w| dm_n; ρ_min reported as the same variational value");
        if integral.method == IntegralMethod::LatticeEstimate {
            report.radius_source = RadiusSource::Estimate;
        }
    }
    let mut all = notes;
    all.append(&mut report.notes);
    report.notes = all;
    report.torus_integral = Some(integral);
    Ok(report)
}
