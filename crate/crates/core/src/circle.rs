//! Arcs of the unit circle and the boundary-map abstraction shared by
//! Möbius automorphisms and finite Blaschke products.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Absolute padding added to both ends of every pushed-forward arc.
pub(crate) const ARC_PAD: f64 = 1e-12;

/// A closed arc from `zs` counter-clockwise to `ze` of angular length `len`.
/// Endpoints are kept as unit vectors so distance bounds need no
/// trigonometry.
///
/// `len >= TAU` denotes the whole circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    len: f64,
    zs: Complex64,
    ze: Complex64,
}

/// `Im(conj(a) b)`: positive when `b` is counter-clockwise from `a`.
fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// `|z|` via `sqrt`, cheaper than `hypot` and accurate for the moduli here.
#[inline]
pub(crate) fn modulus(z: Complex64) -> f64 {
    z.norm_sqr().sqrt()
}

impl Arc {
    /// `{ e^{iθ} : θ ∈ [start, start + len] }`.
    pub fn new(start: f64, len: f64) -> Self {
        if len >= TAU {
            return Self::full();
        }
        let len = len.max(0.0);
        Self {
            len,
            zs: Complex64::cis(start),
            ze: Complex64::cis(start + len),
        }
    }

    /// Arc from its length and endpoints already on the circle.
    pub(crate) fn from_parts(len: f64, zs: Complex64, ze: Complex64) -> Self {
        if len >= TAU {
            return Self::full();
        }
        Self {
            len: len.max(0.0),
            zs,
            ze,
        }
    }

    pub fn full() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            len: TAU,
            zs: one,
            ze: one,
        }
    }

    /// Start angle in `[0, 2π)`.
    pub fn start(&self) -> f64 {
        self.zs.arg().rem_euclid(TAU)
    }

    pub fn len(&self) -> f64 {
        self.len
    }

    pub fn start_point(&self) -> Complex64 {
        self.zs
    }

    pub fn end_point(&self) -> Complex64 {
        self.ze
    }

    pub fn is_full(&self) -> bool {
        self.len >= TAU
    }

    pub fn mid(&self) -> f64 {
        self.start() + 0.5 * self.len
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.contains_point(Complex64::cis(theta))
    }

    /// Whether the unit vector `u` lies on the arc.
    pub fn contains_point(&self, u: Complex64) -> bool {
        if self.is_full() {
            return true;
        }
        if self.len <= PI {
            cross(self.zs, u) >= 0.0 && dot(self.zs, u) >= dot(self.zs, self.ze)
        } else {
            !(cross(self.ze, u) > 0.0 && dot(self.ze, u) > dot(self.ze, self.zs))
        }
    }

    pub fn padded(&self, pad: f64) -> Self {
        if self.len + 2.0 * pad >= TAU {
            return Self::full();
        }
        // cis(±pad) rounds to (1, ±pad) for the tiny pads used here.
        let (ls, le) = if pad <= 1e-8 {
            (Complex64::new(1.0, -pad), Complex64::new(1.0, pad))
        } else {
            (Complex64::cis(-pad), Complex64::cis(pad))
        };
        Self::from_parts(self.len + 2.0 * pad, self.zs * ls, self.ze * le)
    }

    pub fn split(&self) -> (Arc, Arc) {
        let h = 0.5 * self.len;
        let mid = self.zs * Complex64::cis(h);
        (Arc::from_parts(h, self.zs, mid), Arc::from_parts(h, mid, self.ze))
    }

    /// `max |z - r|` over points `z` of the arc.
    pub fn sup_dist(&self, r: Complex64) -> f64 {
        let m = modulus(r);
        if m == 0.0 {
            return 1.0;
        }
        self.sup_dist_with(r, m, r / m)
    }

    /// `min |z - r|` over points `z` of the arc.
    pub fn inf_dist(&self, r: Complex64) -> f64 {
        let m = modulus(r);
        if m == 0.0 {
            return 1.0;
        }
        self.inf_dist_with(r, m, r / m)
    }

    /// [`Arc::sup_dist`] with `|r|` and `r/|r|` precomputed (`r ≠ 0`).
    #[inline]
    pub(crate) fn sup_dist_with(&self, r: Complex64, m: f64, u: Complex64) -> f64 {
        if self.is_full() || self.contains_point(-u) {
            return 1.0 + m;
        }
        (self.zs - r).norm_sqr().max((self.ze - r).norm_sqr()).sqrt()
    }

    /// [`Arc::inf_dist`] with `|r|` and `r/|r|` precomputed (`r ≠ 0`).
    #[inline]
    pub(crate) fn inf_dist_with(&self, r: Complex64, m: f64, u: Complex64) -> f64 {
        if self.is_full() || self.contains_point(u) {
            return (m - 1.0).abs();
        }
        (self.zs - r).norm_sqr().min((self.ze - r).norm_sqr()).sqrt()
    }
}

/// A holomorphic self-map of the closed disk that maps the circle onto
/// itself preserving orientation.
pub trait CircleMap: Send + Sync {
    fn apply(&self, z: Complex64) -> Complex64;

    fn derivative(&self, z: Complex64) -> Complex64;

    /// An arc containing the image of `arc`.
    fn image_arc(&self, arc: &Arc) -> Arc;

    /// Evaluate and snap back onto the circle.
    fn apply_on_circle(&self, z: Complex64) -> Complex64 {
        unit(self.apply(z))
    }
}

pub(crate) fn unit(w: Complex64) -> Complex64 {
    let m = modulus(w);
    if m > 0.0 {
        w / m
    } else {
        w
    }
}

/// Push an arc through a map that is a product of Möbius factors, with
/// `expansion` an upper bound of the sum of the factors' derivative moduli
/// on the circle.
///
/// The arc is cut into pieces short enough that every factor image of a
/// piece is shorter than half a turn, so the per-piece argument increments
/// are unambiguous modulo `2π`. `factor_increment(a, b)` returns the summed
/// counter-clockwise increments of the factors between circle points `a`
/// and `b`.
pub(crate) fn image_arc_by_factors<G, F>(arc: &Arc, expansion: f64, apply: G, mut factor_increment: F) -> Arc
where
    G: Fn(Complex64) -> Complex64,
    F: FnMut(Complex64, Complex64) -> f64,
{
    if arc.is_full() {
        return Arc::full();
    }
    let ws = unit(apply(arc.zs));
    if arc.len == 0.0 {
        return Arc::from_parts(0.0, ws, ws).padded(ARC_PAD);
    }
    let max_piece = PI / (expansion + 1.0);
    let pieces = (arc.len / max_piece).ceil().max(1.0) as usize;
    let total = if pieces == 1 {
        factor_increment(arc.zs, arc.ze)
    } else {
        let step = Complex64::cis(arc.len / pieces as f64);
        let mut total = 0.0;
        let mut a = arc.zs;
        for k in 1..=pieces {
            let b = if k == pieces { arc.ze } else { a * step };
            total += factor_increment(a, b);
            if total >= TAU {
                return Arc::full();
            }
            a = b;
        }
        total
    };
    if total >= TAU {
        return Arc::full();
    }
    let we = unit(apply(arc.ze));
    Arc::from_parts(total, ws, we).padded(ARC_PAD)
}

/// Counter-clockwise argument increment from `a` to `b`, in `[0, 2π)`.
pub(crate) fn ccw_increment(a: Complex64, b: Complex64) -> f64 {
    let d = (b * a.conj()).arg();
    if d < 0.0 {
        d + TAU
    } else {
        d
    }
}
