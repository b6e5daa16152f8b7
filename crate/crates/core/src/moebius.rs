//! Möbius automorphisms of the closed unit disk: evaluation, composition,
//! fixed points and the elliptic / parabolic / hyperbolic classification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::circle::{ccw_increment, image_arc_by_factors, modulus, unit, Arc, CircleMap, ARC_PAD};
use crate::error::{Error, Result};

/// Tolerance for the disk-automorphism validation checks.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Default classification tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default largest rotation order searched when detecting rational rotations.
pub const DEFAULT_M_MAX: u32 = 64;
/// Band on `|z| - 1` inside which a fixed point is tagged as a boundary point.
pub const BOUNDARY_TOL: f64 = 1e-8;
/// Largest denominator examined when looking for near-rational rotations
/// beyond `m_max`.
const AMBIGUITY_MAX_DENOM: u64 = 100_000;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `z ↦ (a z + b) / (c z + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: Complex64,
    pub location: Location,
    pub multiplier: Complex64,
}

/// Conjugacy class of a disk automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum MapClass {
    Identity,
    EllipticRational {
        m: u32,
        z0: Complex64,
    },
    EllipticIrrational {
        z0: Complex64,
        r0: f64,
        theta0: f64,
        multiplier: Complex64,
    },
    Parabolic {
        zeta: Complex64,
    },
    Hyperbolic {
        /// Attracting boundary fixed point, `|φ'(ζ₁)| < 1`.
        zeta1: Complex64,
        /// Repelling boundary fixed point, `|φ'(ζ₂)| > 1`.
        zeta2: Complex64,
        deriv1: f64,
        deriv2: f64,
    },
}

/// How to treat a rotation multiplier whose rationality cannot be decided
/// numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rationality {
    #[default]
    Auto,
    DeclareRational(u32),
    DeclareIrrational,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub m_max: u32,
    pub rationality: Rationality,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            m_max: DEFAULT_M_MAX,
            rationality: Rationality::Auto,
        }
    }
}

impl MoebiusMap {
    /// Build from raw coefficients, checking that the map is an automorphism
    /// of the closed disk.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let f = Self::from_coefficients(a, b, c, d);
        f.validate()?;
        Ok(f)
    }

    /// Build without validation.
    pub fn from_coefficients(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    /// `e^{iθ} (z − p) / (1 − p̄ z)`; trusted, not validated.
    pub fn canonical(theta: f64, p: Complex64) -> Self {
        let u = Complex64::cis(theta);
        Self {
            a: u,
            b: -u * p,
            c: -p.conj(),
            d: c(1.0, 0.0),
        }
    }

    pub fn identity() -> Self {
        Self::rotation(0.0)
    }

    /// `z ↦ e^{iα} z`.
    pub fn rotation(alpha: f64) -> Self {
        Self {
            a: Complex64::cis(alpha),
            b: c(0.0, 0.0),
            c: c(0.0, 0.0),
            d: c(1.0, 0.0),
        }
    }

    /// Elliptic map with interior fixed point `z0` and multiplier `e^{iα}`,
    /// conjugate to the rotation by `α` through `z ↦ (z − z0)/(1 − z̄0 z)`.
    pub fn elliptic(z0: Complex64, alpha: f64) -> Self {
        let to_origin = Self::canonical(0.0, z0);
        let from_origin = to_origin.inverse();
        from_origin
            .compose(&Self::rotation(alpha))
            .compose(&to_origin)
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    fn scale(&self) -> f64 {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.scale();
        if !s.is_finite() || s == 0.0 {
            return Err(Error::Degenerate("all coefficients vanish".into()));
        }
        if self.determinant().norm() <= VALIDATION_TOL * s * s {
            return Err(Error::Degenerate("ad - bc = 0".into()));
        }
        if self.d.norm() <= self.c.norm() {
            return Err(Error::NotDiskAutomorphism(
                "pole lies in the closed disk".into(),
            ));
        }
        let at0 = self.evaluate(c(0.0, 0.0))?;
        if at0.norm() >= 1.0 {
            return Err(Error::NotDiskAutomorphism(format!(
                "|φ(0)| = {} ≥ 1",
                at0.norm()
            )));
        }
        for zeta in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)] {
            let m = self.evaluate(zeta)?.norm();
            if (m - 1.0).abs() > VALIDATION_TOL {
                return Err(Error::NotDiskAutomorphism(format!(
                    "|φ({zeta})| = {m} is not 1"
                )));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm() <= 1e-14 * self.scale() * (1.0 + z.norm()) {
            return Err(Error::Degenerate(format!("denominator vanishes at {z}")));
        }
        Ok((self.a * z + self.b) / den)
    }

    /// `φ'(z) = (ad − bc) / (cz + d)²`.
    pub fn deriv(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        self.determinant() / (den * den)
    }

    /// Divide all coefficients by `sqrt|det|`.
    pub fn normalized(&self) -> Self {
        let s = self.determinant().norm().sqrt();
        Self {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
            d: self.d / s,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
        .normalized()
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .normalized()
    }

    /// `n`-fold composite by repeated composition.
    pub fn power(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let f = self.normalized();
        let s = f.scale();
        f.b.norm() <= tol * s && f.c.norm() <= tol * s && (f.a - f.d).norm() <= tol * s
    }

    /// `[z, φ(z), …, φⁿ(z)]` by repeated evaluation.
    pub fn orbit(&self, z: Complex64, n: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = z;
        out.push(cur);
        for _ in 0..n {
            cur = (self.a * cur + self.b) / (self.c * cur + self.d);
            out.push(cur);
        }
        out
    }

    /// Fixed points with their location relative to the circle and multiplier.
    pub fn fixed_points(&self) -> Result<Vec<FixedPoint>> {
        self.fixed_points_tol(DEFAULT_TOL)
    }

    pub fn fixed_points_tol(&self, tol: f64) -> Result<Vec<FixedPoint>> {
        if self.is_identity(tol) {
            return Err(Error::IdentityMap);
        }
        let f = self.normalized();
        let qa = f.c;
        let qb = f.d - f.a;
        let qc = -f.b;
        let tag = |z: Complex64| {
            let m = z.norm();
            if (m - 1.0).abs() <= BOUNDARY_TOL {
                Location::Boundary
            } else if m < 1.0 {
                Location::Interior
            } else {
                Location::Exterior
            }
        };
        let point = |z: Complex64| FixedPoint {
            point: z,
            location: tag(z),
            multiplier: f.deriv(z),
        };
        if qa.norm() <= tol {
            // Linear equation; the second fixed point is at infinity.
            if qb.norm() <= tol {
                return Err(Error::Degenerate("translation has no finite fixed point".into()));
            }
            return Ok(vec![point(-qc / qb)]);
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc.norm() <= tol {
            let z = -qb / (2.0 * qa);
            return Ok(vec![point(z)]);
        }
        let sq = disc.sqrt();
        let sign = if (qb.conj() * sq).re >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (qb + sign * sq);
        let z1 = q / qa;
        let z2 = qc / q;
        let mut pts = vec![point(z1), point(z2)];
        pts.sort_by(|p, q| p.point.norm().total_cmp(&q.point.norm()));
        Ok(pts)
    }

    pub fn classify(&self, tol: f64, m_max: u32) -> Result<MapClass> {
        self.classify_with(&ClassifyOptions {
            tol,
            m_max,
            rationality: Rationality::Auto,
        })
    }

    pub fn classify_with(&self, opts: &ClassifyOptions) -> Result<MapClass> {
        let tol = opts.tol;
        if self.is_identity(tol) {
            return Ok(MapClass::Identity);
        }
        let pts = self.fixed_points_tol(tol)?;
        if let Some(fp) = pts.iter().find(|p| p.location == Location::Interior) {
            return self.classify_elliptic(fp, opts);
        }
        let boundary: Vec<_> = pts
            .iter()
            .filter(|p| p.location == Location::Boundary)
            .collect();
        match boundary.as_slice() {
            [p] => Ok(MapClass::Parabolic { zeta: p.point }),
            [p, q] => {
                let (att, rep) = if p.multiplier.norm() < q.multiplier.norm() {
                    (p, q)
                } else {
                    (q, p)
                };
                Ok(MapClass::Hyperbolic {
                    zeta1: att.point,
                    zeta2: rep.point,
                    deriv1: att.multiplier.norm(),
                    deriv2: rep.multiplier.norm(),
                })
            }
            _ => Err(Error::NotDiskAutomorphism(format!(
                "fixed point configuration {pts:?} does not belong to a disk automorphism"
            ))),
        }
    }

    fn classify_elliptic(&self, fp: &FixedPoint, opts: &ClassifyOptions) -> Result<MapClass> {
        let z0 = fp.point;
        let angle = fp.multiplier.arg();
        let irrational = MapClass::EllipticIrrational {
            z0,
            r0: z0.norm(),
            theta0: z0.arg(),
            multiplier: fp.multiplier,
        };
        let near_one = |k: u64| (Complex64::cis(angle * k as f64) - 1.0).norm();
        match opts.rationality {
            Rationality::DeclareIrrational => return Ok(irrational),
            Rationality::DeclareRational(m) => {
                if m == 0 || !self.composite_is_identity(m, 1e-6) {
                    return Err(Error::Invalid(format!(
                        "declared rotation order {m} is inconsistent with the map"
                    )));
                }
                return Ok(MapClass::EllipticRational { m, z0 });
            }
            Rationality::Auto => {}
        }
        for k in 1..=opts.m_max {
            if near_one(k as u64) < opts.tol && self.composite_is_identity(k, opts.tol.max(1e-12) * 1e3) {
                return Ok(MapClass::EllipticRational { m: k, z0 });
            }
        }
        let x = (angle / TAU).rem_euclid(1.0);
        for q in convergent_denominators(x, AMBIGUITY_MAX_DENOM) {
            if q > opts.m_max as u64 && near_one(q) < opts.tol {
                return Err(Error::AmbiguousRationality {
                    order: q as u32,
                    m_max: opts.m_max,
                });
            }
        }
        Ok(irrational)
    }

    fn composite_is_identity(&self, m: u32, tol: f64) -> bool {
        let tests = [c(0.3, 0.1), c(-0.5, 0.2), c(0.1, -0.7)];
        tests.iter().all(|&z| {
            let orbit = self.orbit(z, m as usize);
            (orbit[m as usize] - z).norm() <= tol
        })
    }

    /// `sup_𝕋 |φ'|`.
    pub fn boundary_expansion(&self) -> f64 {
        let gap = modulus(self.d) - modulus(self.c);
        modulus(self.determinant()) / (gap * gap)
    }
}

/// Denominators of the continued-fraction convergents of `x ∈ [0, 1)`.
fn convergent_denominators(x: f64, max_denom: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut q_prev, mut q) = (0u64, 1u64);
    let mut frac = x;
    loop {
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a > max_denom as f64 {
            break;
        }
        let a = a as u64;
        let next = a.saturating_mul(q).saturating_add(q_prev);
        if next > max_denom {
            break;
        }
        q_prev = q;
        q = next;
        out.push(q);
        frac = inv - a as f64;
    }
    out
}

impl CircleMap for MoebiusMap {
    fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.deriv(z)
    }

    fn image_arc(&self, arc: &Arc) -> Arc {
        if arc.is_full() {
            return Arc::full();
        }
        let expansion = self.boundary_expansion();
        if arc.len() * (expansion + 1.0) <= PI {
            let ws = unit(self.apply(arc.start_point()));
            let we = unit(self.apply(arc.end_point()));
            let mut inc = ccw_increment(ws, we);
            if inc > PI {
                // The true increment is below π; this is a rounding wrap.
                inc = 0.0;
            }
            return Arc::from_parts(inc, ws, we).padded(ARC_PAD);
        }
        image_arc_by_factors(
            arc,
            expansion,
            |z| self.apply(z),
            |a, b| ccw_increment(self.apply(a), self.apply(b)),
        )
    }
}
