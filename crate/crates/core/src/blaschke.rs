//! Weighted endomorphisms `f ↦ w·(f∘B)` of the disc algebra for finite
//! Blaschke products `B`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::TAU;

use crate::circle::{ccw_increment, image_arc_by_factors, unit, Arc, CircleMap, ARC_PAD};
use crate::cocycle::{rho_lower_periodic, CocycleProbe, RadiusEnclosure, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::region::{SpectralSet, SpectrumEntry};
use crate::spectra::{
    disk, Algebra, CheckResult, OracleSummary, RadiusSource, Spectra, SpectrumReport, Verdict, NOT_COVERED,
};
use crate::weight::{WeightPoly, DEFAULT_ROOT_TOL};

/// Residual required of every reported periodic orbit.
pub const ORBIT_TOL: f64 = 1e-12;
pub const MAX_PERIOD: u32 = 12;

/// `phase · Π (z − a_k)/(1 − ā_k z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    phase: Complex64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, phase: Complex64) -> Result<Self> {
        if zeros.len() < 2 {
            return Err(Error::Hypothesis(format!(
                "a Blaschke product with {} factor(s) is a disk automorphism; at least 2 are required",
                zeros.len()
            )));
        }
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::Invalid(format!("Blaschke zero {a} is not inside the unit disk")));
        }
        let m = phase.norm();
        if !((m - 1.0).abs() < 1e-9) {
            return Err(Error::Invalid(format!("phase {phase} is not unimodular")));
        }
        let b = Self { zeros, phase: phase / m };
        for k in 0..64 {
            let z = Complex64::cis(TAU * (k as f64 + 0.37) / 64.0);
            let r = b.apply(z).norm();
            if (r - 1.0).abs() > 1e-9 {
                return Err(Error::Invalid(format!("|B| = {r} on the unit circle")));
            }
        }
        Ok(b)
    }

    /// `z^d`.
    pub fn power(d: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); d], Complex64::new(1.0, 0.0))
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// All zeros at the origin.
    pub fn is_monomial(&self) -> bool {
        self.zeros.iter().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    fn factor(a: Complex64, z: Complex64) -> Complex64 {
        (z - a) / (1.0 - a.conj() * z)
    }

    /// `sup_𝕋 Σ_k |f_k'|`.
    pub fn expansion(&self) -> f64 {
        self.zeros.iter().map(|a| (1.0 + a.norm()) / (1.0 - a.norm())).sum()
    }
}

impl CircleMap for BlaschkeProduct {
    fn apply(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.phase, |acc, &a| acc * Self::factor(a, z))
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        let vals: Vec<Complex64> = self.zeros.iter().map(|&a| Self::factor(a, z)).collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (k, &a) in self.zeros.iter().enumerate() {
            let den = 1.0 - a.conj() * z;
            let dk = (1.0 - a.norm_sqr()) / (den * den);
            let rest = vals
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, v)| acc * v);
            total += dk * rest;
        }
        self.phase * total
    }

    fn image_arc(&self, arc: &Arc) -> Arc {
        if arc.is_full() {
            return Arc::full();
        }
        if arc.len() == 0.0 {
            let w = unit(self.apply(arc.start_point()));
            return Arc::from_parts(0.0, w, w).padded(ARC_PAD);
        }
        image_arc_by_factors(arc, self.expansion(), |z| self.apply(z), |a, b| {
            self.zeros
                .iter()
                .map(|&r| ccw_increment(unit(Self::factor(r, a)), unit(Self::factor(r, b))))
                .sum()
        })
    }
}

/// Angles in `[0, 2π)` of `B^k(e^{iθ0})`, `k = 0..=n`, renormalised onto
/// the circle at every step.
pub fn boundary_iterate(b: &BlaschkeProduct, theta0: f64, n: usize) -> Vec<f64> {
    let mut z = Complex64::cis(theta0);
    let mut out = Vec::with_capacity(n + 1);
    out.push(theta0.rem_euclid(TAU));
    for _ in 0..n {
        z = b.apply_on_circle(z);
        out.push(z.arg().rem_euclid(TAU));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSearch {
    pub period: u32,
    /// Orbits of exact period `period`, each starting at its point of
    /// smallest angle, sorted by that angle.
    pub orbits: Vec<Vec<Complex64>>,
    /// Whether every solution of `B^p(z) = z` on the circle was found.
    pub complete: bool,
    pub flags: Vec<String>,
}

/// Number of points of exact period `p` of `z ↦ z^d` on the circle.
pub fn exact_period_count(d: u64, p: u32) -> u64 {
    let mut total: i64 = 0;
    for q in 1..=p {
        if p % q == 0 {
            total += mobius(p / q) * (d.pow(q) as i64 - 1);
        }
    }
    total as u64
}

fn mobius(n: u32) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            result = -result;
        }
        f += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Verified orbits of exact period `p` on the circle.
///
/// Monomial products use the exact index dynamics on the `d^p − 1`
/// solutions; general products bracket the fixed points of the lift of
/// `B^p` on a sample grid of at most `budget` points and bisect.
pub fn periodic_points(b: &BlaschkeProduct, p: u32, budget: usize) -> Result<PeriodicSearch> {
    if p == 0 || p > MAX_PERIOD {
        return Err(Error::Invalid(format!("period {p} outside 1..={MAX_PERIOD}")));
    }
    let search = if b.is_monomial() {
        monomial_orbits(b, p, budget)
    } else {
        general_orbits(b, p, budget)
    };
    for orbit in &search.orbits {
        for k in 0..orbit.len() {
            let err = (b.apply(orbit[k]) - orbit[(k + 1) % orbit.len()]).norm();
            if !(err < ORBIT_TOL) {
                return Err(Error::Invalid(format!("orbit verification failed: residual {err:e}")));
            }
        }
    }
    Ok(search)
}

fn monomial_orbits(b: &BlaschkeProduct, p: u32, budget: usize) -> PeriodicSearch {
    let d = b.degree() as u64;
    let big_n = d.pow(p) - 1;
    if big_n as usize > budget {
        return PeriodicSearch {
            period: p,
            orbits: Vec::new(),
            complete: false,
            flags: vec![format!("{big_n} candidate points exceed the budget {budget}")],
        };
    }
    // B^p(z) = Φ z^{d^p} with Φ = phase^{(d^p − 1)/(d − 1)}; solutions are
    // z_k = exp(i(ψ + 2πk)/N), N = d^p − 1, ψ = −arg Φ.
    let beta = b.phase.arg();
    let s = (big_n / (d - 1)) as f64;
    let psi = (-(beta * s)).rem_euclid(TAU);
    let nf = big_n as f64;
    let shift = ((nf * beta + (d as f64 - 1.0) * psi) / TAU).round() as i64;
    let point = |k: u64| Complex64::cis((psi + TAU * k as f64) / nf);
    let next = |k: u64| ((d as i128 * k as i128 + shift as i128).rem_euclid(big_n as i128)) as u64;
    let mut seen = vec![false; big_n as usize];
    let mut orbits = Vec::new();
    for k0 in 0..big_n {
        if seen[k0 as usize] {
            continue;
        }
        let mut idx = vec![k0];
        seen[k0 as usize] = true;
        let mut k = next(k0);
        while k != k0 {
            seen[k as usize] = true;
            idx.push(k);
            k = next(k);
        }
        if idx.len() == p as usize {
            orbits.push(idx.into_iter().map(point).collect::<Vec<_>>());
        }
    }
    finish(p, orbits, true, Vec::new())
}

/// Rotate each orbit to start at its smallest angle and sort.
fn finish(p: u32, mut orbits: Vec<Vec<Complex64>>, complete: bool, flags: Vec<String>) -> PeriodicSearch {
    let angle = |z: &Complex64| z.arg().rem_euclid(TAU);
    for o in &mut orbits {
        let start = (0..o.len())
            .min_by(|&i, &j| angle(&o[i]).total_cmp(&angle(&o[j])))
            .unwrap_or(0);
        o.rotate_left(start);
    }
    orbits.sort_by(|a, b| angle(&a[0]).total_cmp(&angle(&b[0])));
    PeriodicSearch {
        period: p,
        orbits,
        complete,
        flags,
    }
}

fn general_orbits(b: &BlaschkeProduct, p: u32, budget: usize) -> PeriodicSearch {
    let big_d = (b.degree() as f64).powi(p as i32);
    let expected = big_d as usize - 1;
    // Spacing small enough that B^p moves less than π/4 between samples.
    let lip = b.expansion().powi(p as i32);
    let samples = ((8.0 * lip).ceil() as usize).max(64 * (expected + 1));
    let mut flags = Vec::new();
    if samples > budget {
        flags.push(format!("{samples} samples needed, budget {budget}"));
        return finish(p, Vec::new(), false, flags);
    }
    let iterate = |z: Complex64| (0..p).fold(z, |z, _| b.apply_on_circle(z));
    let h = TAU / samples as f64;
    // g(θ) = lift of arg B^p(e^{iθ}) − θ, continuous in θ.
    let mut g = Vec::with_capacity(samples + 1);
    let mut prev = iterate(Complex64::new(1.0, 0.0));
    let mut lift = prev.arg();
    g.push(lift);
    for k in 1..=samples {
        let t = k as f64 * h;
        let cur = iterate(Complex64::cis(t));
        lift += (cur * prev.conj()).arg();
        prev = cur;
        g.push(lift - t);
    }
    let mut roots = Vec::new();
    for k in 0..samples {
        let (g0, g1) = (g[k], g[k + 1]);
        let lo_m = (g0.min(g1) / TAU).ceil() as i64;
        let hi_m = (g0.max(g1) / TAU).floor() as i64;
        for m in lo_m..=hi_m {
            let target = m as f64 * TAU;
            if (g0 - target) * (g1 - target) > 0.0 {
                continue;
            }
            // Bisection on the residual angle of B^p(z)/z.
            let resid = |t: f64| (iterate(Complex64::cis(t)) * Complex64::cis(-t)).arg();
            let (mut lo, mut hi) = (k as f64 * h, (k + 1) as f64 * h);
            let mut rlo = resid(lo);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let rm = resid(mid);
                if rm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (rm > 0.0) == (rlo > 0.0) {
                    lo = mid;
                    rlo = rm;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-16 {
                    break;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
    if roots.len() > 1 && (roots[0] + TAU - roots[roots.len() - 1]).abs() < 1e-10 {
        roots.pop();
    }
    let complete = roots.len() == expected;
    if !complete {
        flags.push(format!("found {} of {expected} solutions of B^p(z) = z", roots.len()));
    }
    let points: Vec<Complex64> = roots.iter().map(|&t| Complex64::cis(t)).collect();
    // Orbits by snapping B(ζ) to the nearest solution.
    let nearest = |z: Complex64| {
        points
            .iter()
            .enumerate()
            .map(|(i, q)| (i, (q - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    };
    let mut used = BTreeSet::new();
    let mut orbits = Vec::new();
    for i0 in 0..points.len() {
        if used.contains(&i0) {
            continue;
        }
        let mut idx = vec![i0];
        let mut cur = i0;
        let mut ok = true;
        loop {
            match nearest(b.apply(points[cur])) {
                Some((j, dist)) if dist < 1e-9 => {
                    if j == i0 {
                        break;
                    }
                    if idx.contains(&j) || idx.len() > p as usize {
                        ok = false;
                        break;
                    }
                    idx.push(j);
                    cur = j;
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        for &i in &idx {
            used.insert(i);
        }
        if ok && idx.len() == p as usize {
            let orbit: Vec<Complex64> = idx.iter().map(|&i| points[i]).collect();
            let good = (0..orbit.len()).all(|k| (b.apply(orbit[k]) - orbit[(k + 1) % orbit.len()]).norm() < ORBIT_TOL);
            if good {
                orbits.push(orbit);
            } else {
                flags.push("an orbit missed the residual tolerance and was dropped".into());
            }
        }
    }
    finish(p, orbits, complete, flags)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EndomorphismOptions {
    /// Largest cocycle length for the sup certificate (lengths 1, 2, 4, …).
    pub n_max: usize,
    /// Largest period searched for lower bounds.
    pub p_max: u32,
    pub sample_grid: usize,
    pub eps: f64,
    pub budget: usize,
    pub periodic_budget: usize,
}

impl Default for EndomorphismOptions {
    fn default() -> Self {
        Self {
            n_max: 16,
            p_max: 8,
            sample_grid: 1024,
            eps: 1e-3,
            budget: DEFAULT_BUDGET,
            periodic_budget: 1 << 16,
        }
    }
}

/// Enclosures of `ρ(T)` and `ρ_min(T)`.
pub fn enclosures(w: &WeightPoly, b: &BlaschkeProduct, opts: &EndomorphismOptions) -> Result<(RadiusEnclosure, RadiusEnclosure)> {
    let mut orbits = Vec::new();
    let mut complete = true;
    for p in 1..=opts.p_max.min(MAX_PERIOD) {
        let s = periodic_points(b, p, opts.periodic_budget)?;
        complete &= s.complete;
        orbits.extend(s.orbits);
    }
    let mut rho = RadiusEnclosure {
        lower: 0.0,
        upper: f64::INFINITY,
        witnesses: Vec::new(),
        certified: true,
    };
    let mut rho_min = RadiusEnclosure {
        lower: 0.0,
        upper: f64::INFINITY,
        witnesses: Vec::new(),
        certified: true,
    };
    let mut best_hi: Option<(f64, usize)> = None;
    let mut best_lo: Option<(f64, usize)> = None;
    for (i, o) in orbits.iter().enumerate() {
        let v = rho_lower_periodic(w, b, o, 1e-9)?;
        if best_hi.is_none_or(|(x, _)| v > x) {
            best_hi = Some((v, i));
        }
        if best_lo.is_none_or(|(x, _)| v < x) {
            best_lo = Some((v, i));
        }
    }
    if let Some((v, i)) = best_hi {
        rho.lower = v;
        rho.witnesses.push(format!("lower: period-{} orbit from {} (mean {v})", orbits[i].len(), orbits[i][0]));
    }
    if let Some((v, i)) = best_lo {
        rho_min.upper = v;
        rho_min.witnesses.push(format!("upper: period-{} orbit from {} (mean {v})", orbits[i].len(), orbits[i][0]));
    }
    if !complete {
        rho.witnesses.push("periodic search incomplete".into());
    }
    let mut n = 1;
    while n <= opts.n_max.max(1) {
        let probe = CocycleProbe::new(b, w, n, opts.sample_grid)?
            .with_budget(opts.budget)
            .with_periodic_seeds(&orbits);
        let (up, lo) = probe.certify_both(opts.eps);
        if up.bound < rho.upper {
            rho.upper = up.bound;
            rho.witnesses.retain(|s| !s.starts_with("upper"));
            rho.witnesses.push(format!("upper: sup-cocycle certificate n={n}, cells={}", up.cells));
        }
        if lo.bound > rho_min.lower {
            rho_min.lower = lo.bound;
            rho_min.witnesses.retain(|s| !s.starts_with("lower"));
            rho_min.witnesses.push(format!("lower: inf-cocycle certificate n={n}, cells={}", lo.cells));
        }
        n *= 2;
    }
    rho_min.upper = rho_min.upper.min(rho.upper);
    rho.lower = rho.lower.max(rho_min.lower);
    // Periodic means and certificates of the same quantity can cross by a
    // few ulps; larger crossings are left visible.
    let p = opts.p_max.max(1) as f64;
    for e in [&mut rho, &mut rho_min] {
        let slack = 8.0 * f64::EPSILON * (p + 2.0) * e.upper.abs();
        if e.lower > e.upper && e.lower - e.upper <= slack {
            e.lower = e.upper;
            e.witnesses.push("bounds agree to rounding".into());
        }
    }
    Ok((rho, rho_min))
}

/// `[lower, upper] ∋ ρ(T)`.
pub fn rho_enclosure(w: &WeightPoly, b: &BlaschkeProduct, n_max: usize, p_max: u32) -> Result<RadiusEnclosure> {
    let opts = EndomorphismOptions {
        n_max,
        p_max,
        ..EndomorphismOptions::default()
    };
    Ok(enclosures(w, b, &opts)?.0)
}

/// Literature values `(ρ, description)` for the two model operators with
/// `B = z²` and `w = (1 ± z)/2`.
fn cited_values(w: &WeightPoly, b: &BlaschkeProduct) -> Option<(&'static str, f64)> {
    if !(b.is_monomial() && b.degree() == 2 && (b.phase - 1.0).norm() < 1e-15) {
        return None;
    }
    let c = w.coeffs();
    let close = |x: Complex64, y: f64| (x - y).norm() < 1e-15;
    match c {
        [c0, c1] if close(*c0, 0.5) && close(*c1, 0.5) => Some(("T1", 1.0)),
        [c0, c1] if close(*c0, 0.5) && close(*c1, -0.5) => Some(("T2", 0.5)),
        _ => None,
    }
}

pub const ENDOMORPHISM_TAG: &str = "ExampleE2";

/// Report for `T = w·(f ∘ B)`: enclosures and the inclusions that follow
/// from them. No exact set is claimed unless the enclosure is tight.
pub fn analyze_endomorphism(w: &WeightPoly, b: &BlaschkeProduct, opts: &EndomorphismOptions) -> Result<SpectrumReport> {
    let (rho, rho_min) = enclosures(w, b, opts)?;
    let tight = rho.upper - rho.lower <= 1e-12 * rho.upper.max(1.0);
    let outer = disk(rho.upper);
    let sigma = if tight {
        SpectrumEntry::exact(disk(rho.upper))
    } else {
        SpectrumEntry::ContainsAtLeast {
            inner: disk(rho.lower),
            outer: Some(outer.clone()),
        }
    };
    let inv = w.classify_invertibility(DEFAULT_ROOT_TOL)?;
    let circle_zero = !inv.on_circle.is_empty();
    let mut ap_inner = Vec::new();
    if circle_zero {
        ap_inner.push(SpectralSet::Origin);
    }
    if tight && rho.upper > 0.0 {
        ap_inner.push(SpectralSet::circle(rho.upper));
    }
    let ap = SpectrumEntry::ContainsAtLeast {
        inner: SpectralSet::union(ap_inner),
        outer: Some(outer.clone()),
    };
    let lsf = if rho_min.upper <= rho.lower {
        SpectrumEntry::ContainsAtLeast {
            inner: crate::spectra::ann(rho_min.upper, rho.lower),
            outer: Some(outer.clone()),
        }
    } else {
        SpectrumEntry::Unknown {
            outer: Some(outer.clone()),
        }
    };
    let unknown = SpectrumEntry::Unknown {
        outer: Some(outer.clone()),
    };
    let spectra = Spectra {
        sigma,
        sigma_ap: ap.clone(),
        sigma_usf: ap,
        sigma_lsf: lsf,
        sigma_sf: unknown.clone(),
        sigma_f: unknown.clone(),
        sigma_w: unknown,
    };
    let constant = w.degree() == 0;
    let tag = if constant { NOT_COVERED } else { ENDOMORPHISM_TAG };
    let mut report = SpectrumReport::bare(Algebra::Endomorphism, tag, spectra, rho.upper, rho_min.lower);
    report.radius_source = RadiusSource::Enclosure;
    report.note(format!("ρ(T) ∈ [{}, {}], ρ_min(T) ∈ [{}, {}]", rho.lower, rho.upper, rho_min.lower, rho_min.upper));
    report.note("σ is a disk (or {0}); σ_ap = σ_usf is rotation invariant");
    report.note("σ_lsf ⊇ {ρ_min ≤ |λ| ≤ ρ}; the certified part uses the upper bound of ρ_min and the lower bound of ρ");
    if circle_zero {
        report.note("w vanishes on the circle, so T is not bounded below and 0 ∈ σ_ap");
    }
    if !tight {
        report.note("the circle |λ| = ρ lies in σ_ap for the true ρ inside the enclosure");
    }
    if constant {
        report.note("constant weight: σ = |c|·σ(T_B); nothing beyond the disk shape is covered");
    }
    if let Some((name, cited)) = cited_values(w, b) {
        let ok = rho.contains(cited, 1e-12);
        report.cited.push(CheckResult {
            name: format!("cited_rho_{name}"),
            closed_form: cited,
            oracle_interval: [rho.lower, rho.upper],
            verdict: if ok { Verdict::Ok } else { Verdict::Flag },
            detail: format!(
                "cited ρ({name}) = {cited}, cited σ({name}) = {cited}𝔻; enclosure [{}, {}]",
                rho.lower, rho.upper
            ),
        });
        if !ok {
            report.note(format!(
                "cited ρ({name}) = {cited} lies outside the enclosure [{}, {}]: FLAG",
                rho.lower, rho.upper
            ));
        }
    }
    report.oracle = Some(OracleSummary { rho, rho_min });
    Ok(report)
}
