//! Rotation-structured plane sets with ternary membership.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::circle::CircleMap;
use crate::moebius::MoebiusMap;
use crate::weight::WeightPoly;

/// Segment budget for one adaptive curve scan.
const SEGMENT_BUDGET: usize = 1 << 20;
const INITIAL_SEGMENTS: usize = 256;
const MIN_SEGMENT: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    In,
    Out,
    Unknown,
}

impl Membership {
    pub fn or(self, other: Self) -> Self {
        match (self, other) {
            (Self::In, _) | (_, Self::In) => Self::In,
            (Self::Out, Self::Out) => Self::Out,
            _ => Self::Unknown,
        }
    }
}

/// `w_m = w · (w∘φ) ⋯ (w∘φ^{m−1})`, evaluated by composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleFn {
    pub map: MoebiusMap,
    pub weight: WeightPoly,
    pub steps: u32,
}

impl CocycleFn {
    pub fn new(map: MoebiusMap, weight: WeightPoly, steps: u32) -> Self {
        Self { map, weight, steps }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        let mut zk = z;
        for k in 0..self.steps {
            acc *= self.weight.eval(zk);
            if k + 1 < self.steps {
                zk = self.map.apply(zk);
            }
        }
        acc
    }

    /// Value and derivative by the product rule along the orbit.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut val = Complex64::new(1.0, 0.0);
        let mut der = Complex64::new(0.0, 0.0);
        let mut zk = z;
        let mut dzk = Complex64::new(1.0, 0.0);
        for _ in 0..self.steps {
            let (wv, wd) = self.weight.eval_with_derivative(zk);
            der = der * wv + val * wd * dzk;
            val *= wv;
            dzk *= self.map.deriv(zk);
            zk = self.map.apply(zk);
        }
        (val, der)
    }

    /// Upper bound of `|d/dθ w_m(e^{iθ})|`.
    pub fn boundary_lipschitz(&self) -> f64 {
        let coeffs = self.weight.coeffs();
        let sup_w: f64 = coeffs.iter().map(|c| c.norm()).sum();
        let sup_dw: f64 = coeffs.iter().enumerate().map(|(k, c)| k as f64 * c.norm()).sum();
        let m = self.steps as i32;
        let mut total = 0.0;
        let mut power = MoebiusMap::identity();
        for _ in 0..m {
            total += sup_dw * power.boundary_expansion();
            power = self.map.compose(&power);
        }
        total * sup_w.powi(m - 1)
    }
}

/// A plane region given by a holomorphic function on the closed disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaneRegion {
    /// `f(closed disk)`.
    RangeOnDisk {
        #[serde(flatten)]
        f: CocycleFn,
    },
    /// `f(𝕋)`.
    CurveImage {
        #[serde(flatten)]
        f: CocycleFn,
    },
}

impl PlaneRegion {
    pub fn membership(&self, c: Complex64, tol: f64) -> Membership {
        match self {
            Self::RangeOnDisk { f } => range_membership(f, c, tol),
            Self::CurveImage { f } => curve_membership(f, c, tol),
        }
    }

    pub fn function(&self) -> &CocycleFn {
        match self {
            Self::RangeOnDisk { f } | Self::CurveImage { f } => f,
        }
    }
}

/// Outcome of an adaptive scan of `θ ↦ f(e^{iθ}) − c`.
struct CurveScan {
    /// Some sample came within `tol` of `c`.
    near: bool,
    /// Some segment could not be certified before the budget ran out.
    unresolved: bool,
    /// Winding number about `c` (valid only when neither flag is set).
    winding: i64,
}

/// Each accepted segment `[a, b]` satisfies `|f(a) − c| > L (b − a) + tol`, so
/// the curve piece stays in a disk excluding the `tol`-ball about `c` and
/// the principal argument increment across it is exact.
fn scan_curve(f: &CocycleFn, c: Complex64, tol: f64, lipschitz: f64) -> CurveScan {
    let h = TAU / INITIAL_SEGMENTS as f64;
    let mut samples: Vec<(f64, Complex64)> = (0..=INITIAL_SEGMENTS)
        .map(|k| {
            let t = k as f64 * h;
            (t, f.eval(Complex64::cis(t)) - c)
        })
        .collect();
    samples[INITIAL_SEGMENTS].1 = samples[0].1;
    let mut scan = CurveScan {
        near: false,
        unresolved: false,
        winding: 0,
    };
    if samples.iter().any(|(_, v)| v.norm() <= tol) {
        scan.near = true;
        return scan;
    }
    let mut total_arg = 0.0;
    let mut evaluations = 0usize;
    let mut stack: Vec<(f64, Complex64, f64, Complex64)> =
        samples.windows(2).rev().map(|p| (p[0].0, p[0].1, p[1].0, p[1].1)).collect();
    while let Some((a, fa, b, fb)) = stack.pop() {
        let len = b - a;
        let reach = lipschitz * len + tol;
        if fa.norm() > reach || fb.norm() > reach {
            total_arg += (fb / fa).arg();
            continue;
        }
        if len < MIN_SEGMENT || evaluations >= SEGMENT_BUDGET {
            scan.unresolved = true;
            total_arg += (fb / fa).arg();
            continue;
        }
        let mid = 0.5 * (a + b);
        let fm = f.eval(Complex64::cis(mid)) - c;
        evaluations += 1;
        if fm.norm() <= tol {
            scan.near = true;
            return scan;
        }
        stack.push((mid, fm, b, fb));
        stack.push((a, fa, mid, fm));
    }
    scan.winding = (total_arg / TAU).round() as i64;
    scan
}

/// Decide `c ∈ f(closed disk)` by the argument principle.
pub fn range_membership(f: &CocycleFn, c: Complex64, tol: f64) -> Membership {
    let scan = scan_curve(f, c, tol, f.boundary_lipschitz());
    if scan.near {
        return Membership::In;
    }
    if scan.unresolved {
        return Membership::Unknown;
    }
    if scan.winding >= 1 {
        Membership::In
    } else {
        Membership::Out
    }
}

/// Decide whether `c` lies within `tol` of the curve `f(𝕋)`.
pub fn curve_membership(f: &CocycleFn, c: Complex64, tol: f64) -> Membership {
    let scan = scan_curve(f, c, tol, f.boundary_lipschitz());
    if scan.near {
        Membership::In
    } else if scan.unresolved {
        Membership::Unknown
    } else {
        Membership::Out
    }
}

/// Closed plane sets built from rotation-invariant primitives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpectralSet {
    Empty,
    Origin,
    Circle { r: f64 },
    Disk { r: f64 },
    Annulus { r1: f64, r2: f64 },
    Points { points: Vec<Complex64> },
    /// `{λ : λ^m ∈ base}`.
    RootPreimage { m: u32, base: PlaneRegion },
    Union { sets: Vec<SpectralSet> },
}

impl SpectralSet {
    pub fn circle(r: f64) -> Self {
        Self::Circle { r }
    }

    pub fn disk(r: f64) -> Self {
        Self::Disk { r }
    }

    /// Closed annulus; degenerates to a circle when the radii coincide.
    pub fn annulus(r1: f64, r2: f64) -> Self {
        let (r1, r2) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        if r1 == r2 {
            Self::Circle { r: r1 }
        } else {
            Self::Annulus { r1, r2 }
        }
    }

    pub fn union(sets: Vec<SpectralSet>) -> Self {
        let mut flat = Vec::new();
        for s in sets {
            match s {
                Self::Empty => {}
                Self::Union { sets } => flat.extend(sets),
                other => {
                    if !flat.contains(&other) {
                        flat.push(other)
                    }
                }
            }
        }
        match flat.len() {
            0 => Self::Empty,
            1 => flat.pop().unwrap(),
            _ => Self::Union { sets: flat },
        }
    }

    pub fn membership(&self, lambda: Complex64, tol: f64) -> Membership {
        let r = lambda.norm();
        let yes = |b: bool| if b { Membership::In } else { Membership::Out };
        match self {
            Self::Empty => Membership::Out,
            Self::Origin => yes(r <= tol),
            Self::Circle { r: rho } => yes((r - rho).abs() <= tol),
            Self::Disk { r: rho } => yes(r <= rho + tol),
            Self::Annulus { r1, r2 } => yes(r >= r1 - tol && r <= r2 + tol),
            Self::Points { points } => yes(points.iter().any(|p| (p - lambda).norm() <= tol)),
            Self::RootPreimage { m, base } => {
                let lm = lambda.powu(*m);
                // Scale the tolerance to the m-th power map near |λ|.
                let scale = (*m as f64) * r.max(1e-300).powi(*m as i32 - 1);
                base.membership(lm, (tol * scale).max(tol * tol))
            }
            Self::Union { sets } => sets
                .iter()
                .fold(Membership::Out, |acc, s| acc.or(s.membership(lambda, tol))),
        }
    }

    /// Whether membership depends on `|λ|` only.
    pub fn is_radial(&self) -> bool {
        match self {
            Self::Empty | Self::Origin | Self::Circle { .. } | Self::Disk { .. } | Self::Annulus { .. } => true,
            Self::Points { .. } | Self::RootPreimage { .. } => false,
            Self::Union { sets } => sets.iter().all(|s| s.is_radial()),
        }
    }

    /// Smallest `R` with the set inside the closed disk of radius `R`, when
    /// it is known without sampling.
    pub fn outer_radius(&self) -> Option<f64> {
        match self {
            Self::Empty | Self::Origin => Some(0.0),
            Self::Circle { r } | Self::Disk { r } => Some(*r),
            Self::Annulus { r2, .. } => Some(*r2),
            Self::Points { points } => Some(points.iter().map(|p| p.norm()).fold(0.0, f64::max)),
            Self::RootPreimage { .. } => None,
            Self::Union { sets } => sets.iter().map(|s| s.outer_radius()).try_fold(0.0, |a: f64, r| r.map(|r| a.max(r))),
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self {
            Self::Empty => "∅".into(),
            Self::Origin => "{0}".into(),
            Self::Circle { r } => format!("|λ| = {r}"),
            Self::Disk { r } => format!("|λ| ≤ {r}"),
            Self::Annulus { r1, r2 } => format!("{r1} ≤ |λ| ≤ {r2}"),
            Self::Points { points } => format!("{} point(s)", points.len()),
            Self::RootPreimage { m, base } => match base {
                PlaneRegion::RangeOnDisk { .. } => format!("λ^{m} ∈ w_{m}(closed disk)"),
                PlaneRegion::CurveImage { .. } => format!("λ^{m} ∈ w_{m}(𝕋)"),
            },
            Self::Union { sets } => sets.iter().map(|s| s.describe()).collect::<Vec<_>>().join(" ∪ "),
        }
    }
}

/// What is known about one spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SpectrumEntry {
    Exact {
        set: SpectralSet,
    },
    /// `inner ⊆ σ ⊆ outer`.
    ContainsAtLeast {
        inner: SpectralSet,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        outer: Option<SpectralSet>,
    },
    Unknown {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        outer: Option<SpectralSet>,
    },
}

impl SpectrumEntry {
    pub fn exact(set: SpectralSet) -> Self {
        Self::Exact { set }
    }

    pub fn membership(&self, lambda: Complex64, tol: f64) -> Membership {
        match self {
            Self::Exact { set } => set.membership(lambda, tol),
            Self::ContainsAtLeast { inner, outer } => match inner.membership(lambda, tol) {
                Membership::In => Membership::In,
                _ => match outer.as_ref().map(|o| o.membership(lambda, tol)) {
                    Some(Membership::Out) => Membership::Out,
                    _ => Membership::Unknown,
                },
            },
            Self::Unknown { outer } => match outer.as_ref().map(|o| o.membership(lambda, tol)) {
                Some(Membership::Out) => Membership::Out,
                _ => Membership::Unknown,
            },
        }
    }

    pub fn exact_set(&self) -> Option<&SpectralSet> {
        match self {
            Self::Exact { set } => Some(set),
            _ => None,
        }
    }

    /// Every primitive set carried by the entry.
    pub fn sets(&self) -> Vec<&SpectralSet> {
        match self {
            Self::Exact { set } => vec![set],
            Self::ContainsAtLeast { inner, outer } => std::iter::once(inner).chain(outer.as_ref()).collect(),
            Self::Unknown { outer } => outer.iter().collect(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Exact { set } => set.describe(),
            Self::ContainsAtLeast { inner, outer: None } => format!("⊇ {}", inner.describe()),
            Self::ContainsAtLeast { inner, outer: Some(o) } => {
                format!("⊇ {} and ⊆ {}", inner.describe(), o.describe())
            }
            Self::Unknown { outer: None } => "unknown".into(),
            Self::Unknown { outer: Some(o) } => format!("unknown, ⊆ {}", o.describe()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> CocycleFn {
        // w = z², identity map, one step.
        CocycleFn::new(MoebiusMap::identity(), WeightPoly::from_real(&[0.0, 0.0, 1.0]).unwrap(), 1)
    }

    #[test]
    fn range_examples() {
        assert_eq!(range_membership(&square(), c(0.25, 0.0), 1e-9), Membership::In);
        assert_eq!(range_membership(&square(), c(2.0, 0.0), 1e-9), Membership::Out);
        let minus_square = CocycleFn::new(
            MoebiusMap::rotation(std::f64::consts::PI),
            WeightPoly::from_real(&[0.0, 1.0]).unwrap(),
            2,
        );
        assert!((minus_square.eval(c(0.3, 0.2)) + c(0.3, 0.2) * c(0.3, 0.2)).norm() < 1e-15);
        assert_eq!(range_membership(&minus_square, c(-0.5, 0.0), 1e-9), Membership::In);
        assert_eq!(range_membership(&minus_square, c(0.0, 1.5), 1e-9), Membership::Out);
    }

    #[test]
    fn winding_matches_brute_force() {
        let f = square();
        let (_, der) = f.eval_with_derivative(c(0.5, 0.5));
        assert!((der - c(1.0, 1.0)).norm() < 1e-15);
        let n = 4096;
        for &p in &[c(0.1, 0.2), c(0.0, -0.9), c(1.2, 0.0)] {
            let total: f64 = (0..n)
                .map(|k| {
                    let a = f.eval(Complex64::cis(TAU * k as f64 / n as f64)) - p;
                    let b = f.eval(Complex64::cis(TAU * (k + 1) as f64 / n as f64)) - p;
                    (b / a).arg()
                })
                .sum();
            let w = (total / TAU).round() as i64;
            let got = range_membership(&f, p, 1e-9);
            assert_eq!(got == Membership::In, w >= 1);
        }
    }

    #[test]
    fn curve_membership_examples() {
        let f = square();
        assert_eq!(curve_membership(&f, c(0.0, 1.0), 1e-9), Membership::In);
        assert_eq!(curve_membership(&f, c(0.0, 0.5), 1e-9), Membership::Out);
    }

    #[test]
    fn radial_sets() {
        let a = SpectralSet::annulus(3.0, 1.0);
        assert_eq!(a, SpectralSet::Annulus { r1: 1.0, r2: 3.0 });
        assert_eq!(a.membership(c(0.0, 2.0), 1e-9), Membership::In);
        assert_eq!(a.membership(c(0.5, 0.0), 1e-9), Membership::Out);
        assert_eq!(SpectralSet::annulus(2.0, 2.0), SpectralSet::circle(2.0));
        let u = SpectralSet::union(vec![SpectralSet::circle(1.0), SpectralSet::Empty, SpectralSet::circle(3.0)]);
        assert_eq!(u.membership(c(-3.0, 0.0), 1e-9), Membership::In);
        assert_eq!(u.membership(c(2.0, 0.0), 1e-9), Membership::Out);
    }

    #[test]
    fn entry_membership() {
        let e = SpectrumEntry::ContainsAtLeast {
            inner: SpectralSet::circle(1.0),
            outer: Some(SpectralSet::disk(2.0)),
        };
        assert_eq!(e.membership(c(1.0, 0.0), 1e-9), Membership::In);
        assert_eq!(e.membership(c(1.5, 0.0), 1e-9), Membership::Unknown);
        assert_eq!(e.membership(c(2.5, 0.0), 1e-9), Membership::Out);
    }

    #[test]
    fn serialization_shape() {
        let s = SpectralSet::RootPreimage {
            m: 2,
            base: PlaneRegion::CurveImage { f: square() },
        };
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["type"], "root_preimage");
        assert_eq!(v["base"]["kind"], "curve_image");
        let back: SpectralSet = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
        let v = serde_json::to_value(SpectralSet::annulus(1.0, 3.0)).unwrap();
        assert_eq!(v, serde_json::json!({"type": "annulus", "r1": 1.0, "r2": 3.0}));
    }
}
