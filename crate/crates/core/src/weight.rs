//! Polynomial weights `w(z) = Σ c_k z^k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::roots::{clustered_roots, horner, horner_scale, horner_with_derivative, Root};

/// Default multiplicity-clustering radius; also the band on `||r| − 1|` that
/// decides whether a root sits on the unit circle.
pub const DEFAULT_ROOT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightPoly {
    coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvertibilityKind {
    /// No roots in the closed disk: `w` is invertible in the disc algebra.
    InvertibleInAlgebra,
    /// Roots only in the open disk, none on the circle.
    NonvanishingOnCircle,
    /// Some root on the circle.
    VanishesOnCircle,
}

/// Root partition relative to the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invertibility {
    pub kind: InvertibilityKind,
    pub inside: Vec<Root>,
    pub on_circle: Vec<Root>,
    pub outside: Vec<Root>,
    /// Roots with `||r| − 1|` in `(tol, 10·tol)`; their classification is
    /// sensitive to the tolerance.
    pub borderline: Vec<Root>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleExtrema {
    pub min_mod: f64,
    pub max_mod: f64,
    pub argmin: f64,
    pub argmax: f64,
}

impl WeightPoly {
    /// Coefficients lowest degree first; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroWeight);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid("non-finite weight coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        Self::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `lead · Π (z − r_j)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Result<Self> {
        let mut p = vec![lead];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
            for (k, &a) in p.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            p = next;
        }
        Self::new(p)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        horner_with_derivative(&self.coeffs, z)
    }

    pub fn scaled(&self, s: Complex64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Roots with multiplicities, clustered with radius `tol^(1/k)`.
    pub fn roots(&self, tol: f64) -> Result<Vec<Root>> {
        if self.degree() == 0 {
            return Ok(Vec::new());
        }
        let roots = clustered_roots(&self.coeffs, tol)?;
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        debug_assert_eq!(total, self.degree());
        let d = self.degree() as f64;
        let floor = 1e-8 * (1.0 + self.max_coeff()) * d;
        for r in &roots {
            let resid = self.eval(r.value).norm();
            let bound = floor.max(1e-8 * d * horner_scale(&self.coeffs, r.value));
            if resid > bound {
                return Err(Error::RootNonConvergence {
                    iterations: 0,
                    trace: vec![resid, bound],
                });
            }
        }
        Ok(roots)
    }

    pub fn classify_invertibility(&self, tol: f64) -> Result<Invertibility> {
        let roots = self.roots(tol)?;
        let mut inv = Invertibility {
            kind: InvertibilityKind::InvertibleInAlgebra,
            inside: Vec::new(),
            on_circle: Vec::new(),
            outside: Vec::new(),
            borderline: Vec::new(),
        };
        for r in roots {
            let gap = r.value.norm() - 1.0;
            if gap.abs() <= tol {
                inv.on_circle.push(r);
            } else if gap < 0.0 {
                inv.inside.push(r);
            } else {
                inv.outside.push(r);
            }
            if gap.abs() > tol && gap.abs() < 10.0 * tol {
                inv.borderline.push(r);
            }
        }
        inv.kind = if !inv.on_circle.is_empty() {
            InvertibilityKind::VanishesOnCircle
        } else if !inv.inside.is_empty() {
            InvertibilityKind::NonvanishingOnCircle
        } else {
            InvertibilityKind::InvertibleInAlgebra
        };
        Ok(inv)
    }

    /// Split `w(z) = (z − z0)^n w₁(z)` and return `(n, w₁(z0))`.
    pub fn factor_at(&self, z0: Complex64) -> (usize, Complex64) {
        const REL_TOL: f64 = 1e-9;
        let mut q = self.coeffs.clone();
        let mut n = 0;
        while q.len() > 1 {
            let scale = horner_scale(&q, z0);
            let (quot, rem) = synthetic_division(&q, z0);
            if rem.norm() > REL_TOL * scale {
                break;
            }
            q = quot;
            n += 1;
        }
        (n, horner(&q, z0))
    }

    /// Polynomial with the given roots divided out (each once per multiplicity).
    pub fn deflate(&self, roots: &[Root]) -> Self {
        let mut q = self.coeffs.clone();
        for r in roots {
            for _ in 0..r.multiplicity {
                if q.len() > 1 {
                    q = synthetic_division(&q, r.value).0;
                }
            }
        }
        Self { coeffs: q }
    }

    /// Extrema of `|w(e^{iθ})|`: uniform grid, then golden-section
    /// refinement around the best grid cells.
    pub fn circle_extrema(&self, samples: usize) -> Result<CircleExtrema> {
        if samples < 16 {
            return Err(Error::Invalid(format!("need at least 16 samples, got {samples}")));
        }
        let h = TAU / samples as f64;
        let modulus = |t: f64| self.eval(Complex64::cis(t)).norm();
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
        let (argmin, min_mod) = golden(|t| modulus(t), (imin as f64 - 1.0) * h, (imin as f64 + 1.0) * h);
        let (argmax, neg) = golden(|t| -modulus(t), (imax as f64 - 1.0) * h, (imax as f64 + 1.0) * h);
        let (argmin, min_mod) = if min_mod <= vals[imin] {
            (argmin, min_mod)
        } else {
            (imin as f64 * h, vals[imin])
        };
        let (argmax, max_mod) = if -neg >= vals[imax] {
            (argmax, -neg)
        } else {
            (imax as f64 * h, vals[imax])
        };
        Ok(CircleExtrema {
            min_mod,
            max_mod,
            argmin: argmin.rem_euclid(TAU),
            argmax: argmax.rem_euclid(TAU),
        })
    }
}

/// Divide by `(z − a)`; returns quotient and remainder.
pub(crate) fn synthetic_division(coeffs: &[Complex64], a: Complex64) -> (Vec<Complex64>, Complex64) {
    let d = coeffs.len() - 1;
    let mut quot = vec![Complex64::new(0.0, 0.0); d];
    let mut acc = coeffs[d];
    for k in (0..d).rev() {
        quot[k] = acc;
        acc = coeffs[k] + acc * a;
    }
    (quot, acc)
}

/// Golden-section minimisation on `[lo, hi]`; returns `(argmin, min)`.
pub(crate) fn golden<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (hi - lo).abs() < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        assert_eq!(w.eval(c(0.0, 0.0)), c(-2.0, 0.0));
        let w = WeightPoly::from_real(&[0.5, 0.5]).unwrap();
        assert_eq!(w.eval(c(-1.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn zero_weight_rejected() {
        assert_eq!(WeightPoly::from_real(&[0.0, 0.0]), Err(Error::ZeroWeight));
    }

    #[test]
    fn roots_examples() {
        let w = WeightPoly::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let r = w.roots(DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        assert_eq!(r[0].value, c(0.0, 0.0));

        let w = WeightPoly::from_real(&[-0.25, 0.0, 1.0]).unwrap();
        let r = w.roots(DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|x| (x.value - c(0.5, 0.0)).norm() < 1e-15 && x.multiplicity == 1));
        assert!(r.iter().any(|x| (x.value - c(-0.5, 0.0)).norm() < 1e-15 && x.multiplicity == 1));

        // (z − 2)(z − i) = z² − (2 + i) z + 2i
        let w = WeightPoly::new(vec![c(0.0, 2.0), c(-2.0, -1.0), c(1.0, 0.0)]).unwrap();
        let r = w.roots(DEFAULT_ROOT_TOL).unwrap();
        assert!(r.iter().any(|x| (x.value - c(2.0, 0.0)).norm() < 1e-10));
        assert!(r.iter().any(|x| (x.value - c(0.0, 1.0)).norm() < 1e-10));
    }

    #[test]
    fn invertibility_examples() {
        let kind = |coeffs: &[f64]| {
            WeightPoly::from_real(coeffs)
                .unwrap()
                .classify_invertibility(DEFAULT_ROOT_TOL)
                .unwrap()
        };
        assert_eq!(kind(&[-2.0, 1.0]).kind, InvertibilityKind::InvertibleInAlgebra);
        assert_eq!(kind(&[0.0, 0.5]).kind, InvertibilityKind::NonvanishingOnCircle);
        let inv = kind(&[0.5, -0.5]);
        assert_eq!(inv.kind, InvertibilityKind::VanishesOnCircle);
        assert!((inv.on_circle[0].value - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(kind(&[3.0]).kind, InvertibilityKind::InvertibleInAlgebra);
    }

    #[test]
    fn borderline_roots_are_reported() {
        let w = WeightPoly::from_roots(c(1.0, 0.0), &[c(1.0 + 5e-7, 0.0)]).unwrap();
        let inv = w.classify_invertibility(DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(inv.kind, InvertibilityKind::InvertibleInAlgebra);
        assert_eq!(inv.borderline.len(), 1);
    }

    #[test]
    fn factor_at_examples() {
        let w = WeightPoly::from_real(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(w.factor_at(c(0.0, 0.0)), (2, c(1.0, 0.0)));
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        assert_eq!(w.factor_at(c(0.0, 0.0)), (0, c(-2.0, 0.0)));
        let w = WeightPoly::from_roots(c(1.0, 0.0), &[c(0.5, 0.0), c(0.5, 0.0), c(3.0, 0.0)]).unwrap();
        let (n, v) = w.factor_at(c(0.5, 0.0));
        assert_eq!(n, 2);
        assert!((v - c(-2.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn circle_extrema_examples() {
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        let e = w.circle_extrema(64).unwrap();
        assert!((e.min_mod - 1.0).abs() < 1e-8 && (e.max_mod - 3.0).abs() < 1e-8);
        assert!(e.argmin.min(TAU - e.argmin) < 1e-6 && (e.argmax - PI).abs() < 1e-6);

        let w = WeightPoly::constant(c(0.0, 2.5)).unwrap();
        let e = w.circle_extrema(16).unwrap();
        assert_eq!((e.min_mod, e.max_mod), (2.5, 2.5));

        let w = WeightPoly::from_real(&[0.5, 0.5]).unwrap();
        let e = w.circle_extrema(64).unwrap();
        assert!(e.min_mod < 1e-8 && (e.argmin - PI).abs() < 1e-6);
        assert!((e.max_mod - 1.0).abs() < 1e-8 && e.argmax.min(TAU - e.argmax) < 1e-6);

        assert!(w.circle_extrema(8).is_err());
    }
}
