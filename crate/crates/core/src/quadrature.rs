//! Poisson-weighted and torus log-modulus integrals.
//!
//! For a one-variable polynomial the Poisson integral of `ln|w|` has a closed
//! form through its roots; adaptive Gauss–Legendre quadrature of the
//! circle-root-deflated weight is kept as an independent self-check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::cocycle::pairwise_sum;
use crate::error::{Error, Result};
use crate::polydisc::WeightPolyN;
use crate::weight::{WeightPoly, DEFAULT_ROOT_TOL};

const GAUSS_ORDER: usize = 32;
const MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralMethod {
    /// Root closed form, confirmed by adaptive panels.
    ClosedForm,
    TensorGauss,
    /// Randomly shifted rank-1 lattice; the value is an estimate.
    LatticeEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogIntegralResult {
    pub value: f64,
    /// Contribution of the peeled circle roots.
    pub singular_part: f64,
    /// `value − singular_part`.
    pub smooth_part: f64,
    pub est_error: f64,
    pub method: IntegralMethod,
    /// Value from the numerical path, when one was run.
    pub numeric_value: Option<f64>,
    pub flags: Vec<String>,
}

/// 32-point Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_rule(GAUSS_ORDER))
}

fn gauss_legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = (-x, w);
        rule[n - 1 - i] = (x, w);
    }
    rule
}

fn gauss_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let terms: Vec<f64> = gauss_legendre().iter().map(|&(x, w)| w * f(mid + half * x)).collect();
    half * pairwise_sum(&terms)
}

/// Adaptive Gauss–Legendre on `[a, b]`; a panel is accepted when it agrees
/// with the sum over its halves within its share of `tol / 4`.
/// Returns `(value, error estimate)`.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, initial_panels: usize, tol: f64) -> (f64, f64) {
    let total = b - a;
    let step = total / initial_panels as f64;
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for k in 0..initial_panels {
        let lo = a + k as f64 * step;
        let hi = if k + 1 == initial_panels { b } else { lo + step };
        let whole = gauss_panel(f, lo, hi);
        refine(f, lo, hi, whole, tol / 4.0 * (hi - lo) / total, 0, &mut values, &mut errors);
    }
    (pairwise_sum(&values), pairwise_sum(&errors))
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    values: &mut Vec<f64>,
    errors: &mut Vec<f64>,
) {
    let mid = 0.5 * (a + b);
    let left = gauss_panel(f, a, mid);
    let right = gauss_panel(f, mid, b);
    let diff = (left + right - whole).abs();
    if diff <= tol.max(4.0 * f64::EPSILON * (left.abs() + right.abs())) || depth >= MAX_DEPTH {
        values.push(left + right);
        errors.push(diff);
        return;
    }
    refine(f, a, mid, left, 0.5 * tol, depth + 1, values, errors);
    refine(f, mid, b, right, 0.5 * tol, depth + 1, values, errors);
}

/// Poisson kernel `P_{z0}(θ) = (1 − |z0|²) / |e^{iθ} − z0|²`.
pub fn poisson_kernel(z0: Complex64, theta: f64) -> f64 {
    (1.0 - z0.norm_sqr()) / (Complex64::cis(theta) - z0).norm_sqr()
}

/// `∫ ln|w(e^{iθ})| P_{z0}(θ) dθ/2π` for `|z0| < 1`.
///
/// Per root: `ln|z0 − r|` when `|r| > 1`, and `ln|1 − r̄ z0|` when `|r| ≤ 1`
/// (on the circle both agree). Circle roots are then peeled off and the
/// deflated weight integrated numerically for the self-check.
pub fn poisson_log_integral(w: &WeightPoly, z0: Complex64, tol: f64) -> Result<LogIntegralResult> {
    if !(z0.norm() < 1.0) {
        return Err(Error::Invalid(format!("kernel centre {z0} is not inside the unit disk")));
    }
    let inv = w.classify_invertibility(DEFAULT_ROOT_TOL)?;
    let root_term = |r: Complex64| {
        if r.norm() > 1.0 {
            (z0 - r).norm().ln()
        } else {
            (1.0 - r.conj() * z0).norm().ln()
        }
    };
    let mut logs = vec![w.leading().norm().ln()];
    for r in inv.inside.iter().chain(&inv.outside) {
        logs.push(r.multiplicity as f64 * root_term(r.value));
    }
    let smooth_part = pairwise_sum(&logs);
    let singular: Vec<f64> = inv
        .on_circle
        .iter()
        .map(|r| r.multiplicity as f64 * root_term(r.value))
        .collect();
    let singular_part = pairwise_sum(&singular);
    let value = smooth_part + singular_part;

    let deflated = w.deflate(&inv.on_circle);
    let integrand = |t: f64| deflated.eval(Complex64::cis(t)).norm().ln() * poisson_kernel(z0, t);
    // Start panels at the kernel peak so that it sits on a panel boundary.
    let peak = z0.arg();
    let quad_tol = (0.25 * tol).max(1e-15);
    let (smooth_numeric, quad_err) = adaptive_integrate(&integrand, peak, peak + TAU, 16, quad_tol * TAU);
    let numeric_value = smooth_numeric / TAU + singular_part;
    let mut flags = Vec::new();
    if !inv.on_circle.is_empty() {
        let k: usize = inv.on_circle.iter().map(|r| r.multiplicity).sum();
        flags.push(format!("peeled {k} circle root(s)"));
    }
    if !inv.borderline.is_empty() {
        flags.push(format!("{} root(s) within 10·tol of the circle", inv.borderline.len()));
    }
    let disagreement = (numeric_value - value).abs();
    if disagreement > tol.max(1e-10) * if inv.on_circle.is_empty() { 1.0 } else { 10.0 } {
        flags.push(format!("closed form and quadrature differ by {disagreement:e}"));
    }
    Ok(LogIntegralResult {
        value,
        singular_part,
        smooth_part: value - singular_part,
        est_error: disagreement.max(quad_err / TAU),
        method: IntegralMethod::ClosedForm,
        numeric_value: Some(numeric_value),
        flags,
    })
}

/// `∫_{𝕋ⁿ} ln|w| dm_n` with tensor Gauss panels when coefficient dominance
/// certifies `w ≠ 0` on the torus, otherwise a lattice estimate.
pub fn torus_log_integral(w: &WeightPolyN, tol: f64, budget: usize) -> Result<LogIntegralResult> {
    if let Some(c0) = w.as_constant() {
        let value = c0.norm().ln();
        return Ok(LogIntegralResult {
            value,
            singular_part: 0.0,
            smooth_part: value,
            est_error: 0.0,
            method: IntegralMethod::ClosedForm,
            numeric_value: None,
            flags: Vec::new(),
        });
    }
    if w.dominance_margin() > 0.0 {
        torus_gauss(w, tol, budget)
    } else {
        torus_lattice(w, tol, budget)
    }
}

/// Tensor Gauss with `2^k` panels per axis, doubled until successive levels
/// agree within `tol` or the point budget is reached. Only meaningful when
/// `w` has no zeros on the torus.
pub fn torus_gauss(w: &WeightPolyN, tol: f64, budget: usize) -> Result<LogIntegralResult> {
    let n = w.dim();
    if n == 0 || n > 4 {
        return Err(Error::Unsupported(format!("torus dimension {n} (supported: 1 to 4)")));
    }
    let mut prev: Option<f64> = None;
    let mut panels = 1usize;
    let mut flags = Vec::new();
    loop {
        let per_axis = panels * GAUSS_ORDER;
        let points = per_axis.checked_pow(n as u32).unwrap_or(usize::MAX);
        if points > budget.max(GAUSS_ORDER.pow(n as u32)) {
            flags.push(format!("point budget {budget} reached at {panels} panel(s) per axis"));
            break;
        }
        let value = tensor_gauss_level(w, panels);
        if let Some(p) = prev {
            let err = (value - p).abs();
            if err <= tol {
                return Ok(LogIntegralResult {
                    value,
                    singular_part: 0.0,
                    smooth_part: value,
                    est_error: err,
                    method: IntegralMethod::TensorGauss,
                    numeric_value: Some(value),
                    flags,
                });
            }
        }
        prev = Some(value);
        panels *= 2;
    }
    let value = prev.unwrap_or(f64::NAN);
    let est_error = if panels > 1 {
        (value - tensor_gauss_level(w, (panels / 4).max(1))).abs()
    } else {
        f64::INFINITY
    };
    if est_error > tol {
        flags.push("estimate: tolerance not reached".into());
    }
    Ok(LogIntegralResult {
        value,
        singular_part: 0.0,
        smooth_part: value,
        est_error,
        method: IntegralMethod::TensorGauss,
        numeric_value: Some(value),
        flags,
    })
}

fn tensor_gauss_level(w: &WeightPolyN, panels: usize) -> f64 {
    let n = w.dim();
    let rule = gauss_legendre();
    let h = TAU / panels as f64;
    let mut nodes = Vec::with_capacity(panels * GAUSS_ORDER);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for &(x, wt) in rule {
            nodes.push((Complex64::cis(mid + 0.5 * h * x), wt * 0.5 * h / TAU));
        }
    }
    let m = nodes.len();
    let total = m.pow(n as u32);
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut terms = Vec::with_capacity(m);
    let mut inner = Vec::with_capacity(total / m + 1);
    // Innermost axis summed per outer index, then those sums pairwise.
    for idx in 0..total / m {
        let mut rest = idx;
        let mut weight = 1.0;
        for axis in 1..n {
            let (zn, wt) = nodes[rest % m];
            rest /= m;
            z[axis] = zn;
            weight *= wt;
        }
        terms.clear();
        for &(z0, wt) in &nodes {
            z[0] = z0;
            terms.push(wt * w.eval(&z).norm().ln());
        }
        inner.push(weight * pairwise_sum(&terms));
    }
    pairwise_sum(&inner)
}

/// Randomly shifted Korobov lattice with median-of-means over shift groups.
pub fn torus_lattice(w: &WeightPolyN, tol: f64, budget: usize) -> Result<LogIntegralResult> {
    let n = w.dim();
    if n == 0 || n > 4 {
        return Err(Error::Unsupported(format!("torus dimension {n} (supported: 1 to 4)")));
    }
    const GROUPS: usize = 4;
    const SHIFTS_PER_GROUP: usize = 4;
    let shifts = GROUPS * SHIFTS_PER_GROUP;
    let points = prev_prime((budget / shifts).max(31));
    let gen = korobov_vector(n, points);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_7a11);
    let mut shift_means = Vec::with_capacity(shifts);
    for _ in 0..shifts {
        let shift: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let mut vals = Vec::with_capacity(points);
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..points {
            for j in 0..n {
                let x = ((k as u64 * gen[j]) % points as u64) as f64 / points as f64 + shift[j];
                z[j] = Complex64::cis(TAU * x.fract());
            }
            let m = w.eval(&z).norm();
            vals.push(if m > 0.0 { m.ln() } else { -745.0 });
        }
        shift_means.push(pairwise_sum(&vals) / points as f64);
    }
    let mut group_means: Vec<f64> = shift_means
        .chunks(SHIFTS_PER_GROUP)
        .map(|g| g.iter().sum::<f64>() / g.len() as f64)
        .collect();
    group_means.sort_by(f64::total_cmp);
    let value = 0.5 * (group_means[GROUPS / 2 - 1] + group_means[GROUPS / 2]);
    let est_error = group_means[GROUPS - 1] - group_means[0];
    let mut flags = vec![format!("estimate: rank-1 lattice, {points} points x {shifts} shifts")];
    if est_error > tol {
        flags.push(format!("estimate: spread {est_error:e} exceeds tolerance {tol:e}"));
    }
    Ok(LogIntegralResult {
        value,
        singular_part: 0.0,
        smooth_part: value,
        est_error,
        method: IntegralMethod::LatticeEstimate,
        numeric_value: Some(value),
        flags,
    })
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prev_prime(mut n: usize) -> usize {
    while !is_prime(n) {
        n -= 1;
    }
    n
}

/// Korobov vector `(1, a, a², …) mod N`, with `a` chosen among a fixed set
/// of candidates to minimise the `P₂` figure of merit.
fn korobov_vector(n: usize, points: usize) -> Vec<u64> {
    let np = points as u64;
    let vector = |a: u64| {
        let mut g = vec![1u64; n];
        for j in 1..n {
            g[j] = g[j - 1] * a % np;
        }
        g
    };
    if n == 1 {
        return vec![1];
    }
    let candidates = 64.min(points as u64 / 2);
    let sample = points.min(4096);
    let mut best = (f64::INFINITY, 1u64);
    for i in 1..=candidates {
        let a = 2 + (i * (np / 2 - 2)) / (candidates + 1);
        let g = vector(a);
        // P₂ with the Bernoulli kernel 1 + 2π² B₂(x), on a prefix of points.
        let merit: f64 = (0..sample as u64)
            .map(|k| {
                g.iter()
                    .map(|&gj| {
                        let x = ((k * gj) % np) as f64 / np as f64;
                        1.0 + 2.0 * PI * PI * (x * x - x + 1.0 / 6.0)
                    })
                    .product::<f64>()
            })
            .sum::<f64>();
        if merit < best.0 {
            best = (merit, a);
        }
    }
    vector(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let rule = gauss_legendre();
        let s: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
        let x62: f64 = rule.iter().map(|&(x, w)| w * x.powi(62)).sum();
        assert!((x62 - 2.0 / 63.0).abs() < 1e-14);
    }

    #[test]
    fn poisson_examples() {
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        let r = poisson_log_integral(&w, c(0.0, 0.0), 1e-12).unwrap();
        assert!((r.value - 2f64.ln()).abs() < 1e-14);
        assert!((r.numeric_value.unwrap() - 2f64.ln()).abs() < 1e-10);

        let w = WeightPoly::from_real(&[1.0, -1.0]).unwrap();
        let r = poisson_log_integral(&w, c(0.0, 0.0), 1e-12).unwrap();
        assert!(r.value.abs() < 1e-14);
        assert!(r.numeric_value.unwrap().abs() < 1e-10);
        assert_eq!(r.flags.len(), 1);

        let w = WeightPoly::from_real(&[-0.5, 1.0]).unwrap();
        let r = poisson_log_integral(&w, c(0.5, 0.0), 1e-12).unwrap();
        assert!((r.value - 0.75f64.ln()).abs() < 1e-14);
        assert!((r.numeric_value.unwrap() - 0.75f64.ln()).abs() < 1e-10);
        assert_eq!(r.value, r.singular_part + r.smooth_part);
    }

    #[test]
    fn harmonic_mean_value() {
        let w = WeightPoly::from_roots(c(2.0, 1.0), &[c(1.5, 0.3), c(-0.2, 2.0), c(0.0, -3.0)]).unwrap();
        let r = poisson_log_integral(&w, c(0.0, 0.0), 1e-12).unwrap();
        assert!((r.value - w.eval(c(0.0, 0.0)).norm().ln()).abs() < 1e-12);
    }

    #[test]
    fn rotation_covariance() {
        let w = WeightPoly::from_roots(c(1.0, 0.0), &[c(0.4, 0.1), c(1.0, 0.0), c(-1.3, 0.7)]).unwrap();
        let z0 = c(0.3, -0.6);
        let alpha = 0.9;
        let rot = Complex64::cis(alpha);
        // w(e^{-iα} z) has roots rotated by α.
        let w_rot = WeightPoly::from_roots(c(1.0, 0.0), &[c(0.4, 0.1) * rot, rot, c(-1.3, 0.7) * rot]).unwrap();
        let a = poisson_log_integral(&w, z0, 1e-10).unwrap();
        let b = poisson_log_integral(&w_rot, z0 * rot, 1e-10).unwrap();
        assert!((a.value - b.value).abs() < 1e-12);
        assert!((a.numeric_value.unwrap() - b.numeric_value.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn torus_examples() {
        let w = WeightPolyN::from_terms(2, &[(vec![0, 0], c(6.0, 0.0)), (vec![1, 0], c(1.0, 0.0)), (vec![0, 1], c(1.0, 0.0))]).unwrap();
        let r = torus_log_integral(&w, 1e-8, 1 << 20).unwrap();
        assert_eq!(r.method, IntegralMethod::TensorGauss);
        assert!((r.value - 6f64.ln()).abs() < 1e-6);

        let w = WeightPolyN::from_terms(3, &[(vec![0, 0, 0], c(0.0, 2.5))]).unwrap();
        let r = torus_log_integral(&w, 1e-8, 1 << 20).unwrap();
        assert_eq!(r.value, 2.5f64.ln());

        let w = WeightPolyN::from_terms(2, &[(vec![0, 0], c(-2.0, 0.0)), (vec![1, 0], c(1.0, 0.0))]).unwrap();
        let r = torus_log_integral(&w, 1e-8, 1 << 20).unwrap();
        assert!((r.value - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn lattice_estimate_on_vanishing_weight() {
        // ln|1 − z₁ z₂| has torus mean 0.
        let w = WeightPolyN::from_terms(2, &[(vec![0, 0], c(1.0, 0.0)), (vec![1, 1], c(-1.0, 0.0))]).unwrap();
        let r = torus_log_integral(&w, 1e-3, 1 << 16).unwrap();
        assert_eq!(r.method, IntegralMethod::LatticeEstimate);
        assert!(r.value.abs() < 2e-2, "{r:?}");
    }
}
