//! Polynomial roots: balanced companion-matrix eigenvalues polished by
//! Aberth–Ehrlich simultaneous iteration, then clustered into multiple roots.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ABERTH_MAX_ITER: usize = 200;

/// A root with its multiplicity.
///
/// `spread` is the radius of the numerical cluster that was merged into this
/// root; it is zero for simple roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
    #[serde(default)]
    pub spread: f64,
}

/// Horner evaluation, coefficients lowest degree first.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and derivative in one Horner pass.
pub fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `Σ |c_k| |z|^k`, the natural scale for rounding error in `horner`.
pub fn horner_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// All roots counted with multiplicity (no clustering). The slice must
/// have a nonzero last coefficient.
pub fn raw_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len().saturating_sub(1);
    let lead = coeffs[degree];
    if lead.norm() == 0.0 {
        return Err(Error::Degenerate("leading coefficient is zero".into()));
    }
    let zeros_at_origin = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[zeros_at_origin..];
    let mut out = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let d = reduced.len() - 1;
    match d {
        0 => {}
        1 => out.push(-reduced[0] / reduced[1]),
        2 => {
            let (qa, qb, qc) = (reduced[2], reduced[1], reduced[0]);
            let sq = (qb * qb - 4.0 * qa * qc).sqrt();
            let sign = if (qb.conj() * sq).re >= 0.0 { 1.0 } else { -1.0 };
            let q = -0.5 * (qb + sign * sq);
            if q.norm() == 0.0 {
                out.extend([Complex64::new(0.0, 0.0); 2]);
            } else {
                out.push(q / qa);
                out.push(qc / q);
            }
        }
        _ => {
            let mut guesses = companion_eigenvalues(reduced);
            separate_duplicates(&mut guesses);
            aberth_polish(reduced, &mut guesses)?;
            out.extend(guesses);
        }
    }
    Ok(out)
}

fn companion_eigenvalues(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for j in 0..d {
        m[(0, j)] = -coeffs[d - 1 - j] / lead;
    }
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    balance(&mut m);
    match m.clone().schur().eigenvalues() {
        Some(ev) => ev.iter().copied().collect(),
        None => circle_guesses(coeffs),
    }
}

/// Parlett–Reinsch balancing by powers of two.
fn balance(m: &mut DMatrix<Complex64>) {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let n = m.nrows();
    for _ in 0..100 {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].norm();
                    r += m[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= SQRDX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= SQRDX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Initial guesses on a circle of the Cauchy-bound radius.
fn circle_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].norm();
    let radius = coeffs[..d]
        .iter()
        .enumerate()
        .map(|(k, c)| (c.norm() / lead).powf(1.0 / (d - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    (0..d)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * (k as f64 + 0.25) / d as f64))
        .collect()
}

/// Aberth needs pairwise distinct starting points.
fn separate_duplicates(z: &mut [Complex64]) {
    for i in 1..z.len() {
        for j in 0..i {
            if (z[i] - z[j]).norm() <= 1e-12 * (1.0 + z[i].norm()) {
                z[i] += Complex64::from_polar(1e-8 * (1.0 + z[i].norm()), 0.7 * i as f64);
            }
        }
    }
}

fn aberth_polish(coeffs: &[Complex64], z: &mut [Complex64]) -> Result<()> {
    let n = z.len();
    let mut trace = Vec::new();
    for _ in 0..ABERTH_MAX_ITER {
        let mut max_corr: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i && z[j] != z[i])
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let corr = ratio / (1.0 - ratio * s);
            if corr.is_finite() {
                z[i] -= corr;
                max_corr = max_corr.max(corr.norm() / (1.0 + z[i].norm()));
            }
        }
        trace.push(max_corr);
        if max_corr <= 4.0 * f64::EPSILON {
            return Ok(());
        }
    }
    if z.iter().all(|r| r.is_finite()) {
        // Multiple roots converge linearly; the residual check downstream
        // decides whether the result is usable.
        return Ok(());
    }
    let tail = trace.split_off(trace.len().saturating_sub(8));
    Err(Error::RootNonConvergence {
        iterations: ABERTH_MAX_ITER,
        trace: tail,
    })
}

/// Roots clustered into multiple roots, each multiple root refined by
/// Newton on the derivative of order `multiplicity − 1`, where it is simple.
pub fn clustered_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Root>> {
    let raw = raw_roots(coeffs)?;
    let mut roots = cluster(&raw, tol);
    for r in roots.iter_mut().filter(|r| r.multiplicity > 1) {
        let dk = derivative_coeffs(coeffs, r.multiplicity - 1);
        let mut z = r.value;
        for _ in 0..20 {
            let (p, dp) = horner_with_derivative(&dk, z);
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            z -= step;
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
                break;
            }
        }
        if z.is_finite() && (z - r.value).norm() <= r.spread.max(tol) {
            r.value = z;
        }
    }
    Ok(roots)
}

/// Coefficients of the `k`-th derivative.
pub fn derivative_coeffs(coeffs: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    for _ in 0..k {
        if c.len() <= 1 {
            return vec![Complex64::new(0.0, 0.0)];
        }
        c = c.iter().enumerate().skip(1).map(|(j, a)| a * j as f64).collect();
    }
    c
}

/// Merge numerical roots into multiple roots: a group of `k` roots is merged
/// when all of them lie within `tol^(1/k)` of the group centroid.
pub fn cluster(raw: &[Complex64], tol: f64) -> Vec<Root> {
    let mut groups: Vec<Vec<Complex64>> = raw.iter().map(|&z| vec![z]).collect();
    let centroid = |g: &[Complex64]| g.iter().sum::<Complex64>() / g.len() as f64;
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                let ci = centroid(&groups[i]);
                let cj = centroid(&groups[j]);
                let dist = (ci - cj).norm();
                if best.is_some_and(|(d, _, _)| d <= dist) {
                    continue;
                }
                let k = groups[i].len() + groups[j].len();
                let radius = tol.powf(1.0 / k as f64);
                let merged = (ci * groups[i].len() as f64 + cj * groups[j].len() as f64) / k as f64;
                let fits = groups[i]
                    .iter()
                    .chain(groups[j].iter())
                    .all(|z| (z - merged).norm() <= radius);
                if fits {
                    best = Some((dist, i, j));
                }
            }
        }
        match best {
            Some((_, i, j)) => {
                let g = groups.swap_remove(j);
                groups[i].extend(g);
            }
            None => break,
        }
    }
    let mut roots: Vec<Root> = groups
        .into_iter()
        .map(|g| {
            let c = centroid(&g);
            let spread = g.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
            Root {
                value: c,
                multiplicity: g.len(),
                spread,
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        a.value
            .norm()
            .total_cmp(&b.value.norm())
            .then(a.value.arg().total_cmp(&b.value.arg()))
    });
    roots
}
