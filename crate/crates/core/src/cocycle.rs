//! Weight cocycles `w_n = w · (w∘φ) ⋯ (w∘φ^{n−1})` along boundary orbits and
//! the growth-rate bounds derived from them.
//!
//! Upper bounds for `ρ` and lower bounds for `ρ_min` are certified by pushing
//! arcs of the circle through the map and bounding `|w|` on each image arc
//! from the root factorisation. Cells are refined branch-and-bound style.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use crate::circle::{modulus, Arc, CircleMap};
use crate::error::{Error, Result};
use crate::moebius::{MapClass, MoebiusMap};
use crate::weight::{WeightPoly, DEFAULT_ROOT_TOL};

/// Factors below this modulus make the log-cocycle `−∞`.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

pub const DEFAULT_BUDGET: usize = 1 << 15;

const BATCH: usize = 64;
const CERT_CELLS: usize = 128;

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `|w| = |lead| Π |z − r_j|^{m_j}` with each multiple root padded by its
/// cluster spread, so arc bounds stay valid for the unclustered roots.
#[derive(Debug, Clone)]
pub(crate) struct Factors {
    log_lead: f64,
    /// Roots at the origin contribute `|z| = 1` on the circle and are dropped.
    roots: Vec<RootFactor>,
}

#[derive(Debug, Clone, Copy)]
struct RootFactor {
    r: Complex64,
    modulus: f64,
    dir: Complex64,
    mult: i32,
    pad: f64,
}

impl Factors {
    pub(crate) fn new(w: &WeightPoly) -> Result<Self> {
        let roots = w
            .roots(DEFAULT_ROOT_TOL)?
            .into_iter()
            .filter(|r| r.value.norm() + r.spread > 0.0)
            .map(|r| {
                let m = modulus(r.value);
                RootFactor {
                    r: r.value,
                    modulus: m,
                    dir: if m > 0.0 { r.value / m } else { Complex64::new(1.0, 0.0) },
                    mult: r.multiplicity as i32,
                    pad: r.spread,
                }
            })
            .collect();
        Ok(Self {
            log_lead: w.leading().norm().ln(),
            roots,
        })
    }

    /// `Π sup_arc |z − r_j|^{m_j}` (the leading coefficient excluded).
    fn sup_prod(&self, arc: &Arc) -> f64 {
        let mut prod = 1.0;
        for f in &self.roots {
            let d = if f.modulus > 0.0 {
                arc.sup_dist_with(f.r, f.modulus, f.dir)
            } else {
                1.0
            };
            prod *= (d + f.pad).powi(f.mult);
        }
        prod
    }

    /// `Π inf_arc |z − r_j|^{m_j}` (the leading coefficient excluded).
    fn inf_prod(&self, arc: &Arc) -> f64 {
        let mut prod = 1.0;
        for f in &self.roots {
            let d = if f.modulus > 0.0 {
                arc.inf_dist_with(f.r, f.modulus, f.dir)
            } else {
                1.0
            };
            prod *= (d - f.pad).max(0.0).powi(f.mult);
        }
        prod
    }

    fn log_sup(&self, arc: &Arc) -> f64 {
        self.log_lead + self.sup_prod(arc).ln()
    }

    fn log_inf(&self, arc: &Arc) -> f64 {
        self.log_lead + self.inf_prod(arc).ln()
    }

    fn vanishes_on_circle(&self) -> bool {
        let full = Arc::full();
        self.roots.iter().any(|f| full.inf_dist(f.r) <= f.pad)
    }
}

/// Sum of logs of positive factors, taken as logs of running products that
/// are flushed before they leave `[1e-150, 1e150]`.
#[derive(Debug, Default)]
struct LogAccumulator {
    logs: Vec<f64>,
    run: Option<f64>,
}

impl LogAccumulator {
    fn push(&mut self, x: f64) {
        if !(1e-150..=1e150).contains(&x) {
            self.logs.push(x.ln());
            return;
        }
        match self.run {
            None => self.run = Some(x),
            Some(r) => {
                let next = r * x;
                if (1e-150..=1e150).contains(&next) {
                    self.run = Some(next);
                } else {
                    self.logs.push(r.ln());
                    self.run = Some(x);
                }
            }
        }
    }

    fn total(mut self) -> f64 {
        if let Some(r) = self.run.take() {
            self.logs.push(r.ln());
        }
        pairwise_sum(&self.logs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Sup,
    Inf,
}

/// Orbit-sampled cocycle data for one map/weight pair.
pub struct CocycleProbe<'a> {
    map: &'a dyn CircleMap,
    weight: &'a WeightPoly,
    factors: Factors,
    n: usize,
    sample_grid: usize,
    budget: usize,
    seeds: Vec<Vec<Complex64>>,
}

/// Result of a branch-and-bound certification, reported as a radius
/// (already raised to the power `1/n`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedBound {
    /// The certified bound.
    pub bound: f64,
    /// Best sampled value of `|w_n(t)|^{1/n}` on the same side.
    pub sample: f64,
    /// Circle point that produced `sample`.
    pub witness_theta: f64,
    pub n: usize,
    pub cells: usize,
    /// Whether `bound` came within `eps` of `sample` before the budget ran out.
    pub converged: bool,
}

/// Two-sided bound on a growth rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEnclosure {
    pub lower: f64,
    pub upper: f64,
    pub witnesses: Vec<String>,
    /// False when either side rests on sampling rather than a certificate.
    pub certified: bool,
}

impl RadiusEnclosure {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lower - tol && x <= self.upper + tol
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    arc: Arc,
    /// Log bound, oriented so that larger is worse.
    key: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| {
                let (a, b) = (self.arc.start_point(), other.arc.start_point());
                b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
            })
    }
}

impl<'a> CocycleProbe<'a> {
    pub fn new(map: &'a dyn CircleMap, weight: &'a WeightPoly, n: usize, sample_grid: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("cocycle length n must be at least 1".into()));
        }
        if sample_grid < 8 {
            return Err(Error::Invalid(format!("sample grid {sample_grid} < 8")));
        }
        Ok(Self {
            map,
            weight,
            factors: Factors::new(weight)?,
            n,
            sample_grid: sample_grid.next_power_of_two(),
            budget: DEFAULT_BUDGET,
            seeds: Vec::new(),
        })
    }

    /// Periodic orbits whose exact cocycle values seed the best sample.
    /// Following a repelling orbit numerically drifts off it within a few
    /// dozen steps, so these are evaluated cyclically instead. Orbits that
    /// fail verification at `1e-9` are dropped.
    pub fn with_periodic_seeds(mut self, orbits: &[Vec<Complex64>]) -> Self {
        self.seeds = orbits
            .iter()
            .filter(|o| rho_lower_periodic(self.weight, self.map, o, 1e-9).is_ok())
            .cloned()
            .collect();
        self
    }

    /// `Σ_{k<n} ln|w(ζ_{k mod p})|` along a periodic orbit.
    fn log_cocycle_periodic(&self, orbit: &[Complex64]) -> f64 {
        let logs: Vec<f64> = orbit.iter().map(|&z| self.weight.eval(z).norm().ln()).collect();
        let p = orbit.len();
        let full = pairwise_sum(&logs) * (self.n / p) as f64;
        full + pairwise_sum(&logs[..self.n % p])
    }

    pub fn with_budget(mut self, cells: usize) -> Self {
        self.budget = cells.max(self.sample_grid);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Σ_{k<n} ln|w(φ^k(t))|`, summed pairwise over logs of running
    /// products.
    pub fn log_cocycle(&self, t: Complex64) -> f64 {
        let mut z = t;
        let mut acc = LogAccumulator::default();
        for k in 0..self.n {
            let w = self.weight.eval(z);
            let m2 = w.norm_sqr();
            let m = if m2.is_normal() && m2 < 1e300 { m2.sqrt() } else { w.norm() };
            if !(m >= UNDERFLOW_FLOOR) {
                return f64::NEG_INFINITY;
            }
            acc.push(m);
            if k + 1 < self.n {
                z = self.map.apply_on_circle(z);
            }
        }
        acc.total()
    }

    /// Certified `U ≥ (sup_𝕋 |w_n|)^{1/n} ≥ ρ(T)`.
    pub fn rho_upper_certified(&self, eps: f64) -> CertifiedBound {
        let grid = self.initial_grid(true, false);
        self.refine(Side::Sup, eps, grid)
    }

    /// Certified `L ≤ (min_𝕋 |w_n|)^{1/n} ≤ ρ_min(T)`.
    pub fn rho_min_lower_certified(&self, eps: f64) -> CertifiedBound {
        if self.factors.vanishes_on_circle() {
            return self.zero_min();
        }
        let grid = self.initial_grid(false, true);
        self.refine(Side::Inf, eps, grid)
    }

    /// Both certificates from one shared initial grid.
    pub fn certify_both(&self, eps: f64) -> (CertifiedBound, CertifiedBound) {
        let vanishes = self.factors.vanishes_on_circle();
        let grid = self.initial_grid(true, !vanishes);
        let lower = if vanishes {
            self.zero_min()
        } else {
            self.refine(Side::Inf, eps, grid.clone())
        };
        (self.refine(Side::Sup, eps, grid), lower)
    }

    fn zero_min(&self) -> CertifiedBound {
        // A circle zero has preimages on the circle at every step, so
        // min |w_n| = 0 for all n.
        CertifiedBound {
            bound: 0.0,
            sample: 0.0,
            witness_theta: 0.0,
            n: self.n,
            cells: 0,
            converged: true,
        }
    }

    /// Log bounds `(Σ ln sup|w|, −Σ ln inf|w|)` over the pushed-forward arcs.
    fn cell_keys(&self, arc: &Arc, sup: bool, inf: bool) -> (f64, f64) {
        let full = Arc::full();
        let mut arc = *arc;
        let mut s = LogAccumulator::default();
        let mut i = LogAccumulator::default();
        let mut steps = self.n;
        let mut rest = 0.0;
        for k in 0..self.n {
            if arc.is_full() {
                steps = k;
                rest = (self.n - k) as f64;
                break;
            }
            if sup {
                s.push(self.factors.sup_prod(&arc));
            }
            if inf {
                i.push(self.factors.inf_prod(&arc));
            }
            if k + 1 < self.n {
                arc = self.map.image_arc(&arc);
            }
        }
        let lead = steps as f64 * self.factors.log_lead;
        let s = if sup {
            s.total() + lead + rest * self.factors.log_sup(&full)
        } else {
            0.0
        };
        let i = if inf {
            -(i.total() + lead + rest * self.factors.log_inf(&full))
        } else {
            0.0
        };
        (s, i)
    }

    fn evaluate(&self, arc: Arc, sup: bool, inf: bool) -> Evaluated {
        let (sup_key, inf_key) = self.cell_keys(&arc, sup, inf);
        let theta = arc.mid();
        Evaluated {
            arc: Some(arc),
            sup_key,
            inf_key,
            sample: self.log_cocycle(Complex64::cis(theta)),
            theta,
        }
    }

    /// Certification starts from at most `CERT_CELLS` arcs; the remaining
    /// sample points only feed the best sample.
    fn initial_grid(&self, sup: bool, inf: bool) -> Vec<Evaluated> {
        let cells = self.sample_grid.min(CERT_CELLS);
        let stride = self.sample_grid / cells;
        let h = TAU / cells as f64;
        let g = TAU / self.sample_grid as f64;
        (0..self.sample_grid)
            .into_par_iter()
            .map(|j| {
                if j % stride == 0 {
                    self.evaluate(Arc::new((j / stride) as f64 * h, h), sup, inf)
                } else {
                    let theta = j as f64 * g;
                    Evaluated {
                        arc: None,
                        sup_key: f64::NEG_INFINITY,
                        inf_key: f64::NEG_INFINITY,
                        sample: self.log_cocycle(Complex64::cis(theta)),
                        theta,
                    }
                }
            })
            .collect()
    }

    fn refine(&self, side: Side, eps: f64, grid: Vec<Evaluated>) -> CertifiedBound {
        let n = self.n as f64;
        let (sup, inf) = (side == Side::Sup, side == Side::Inf);
        let mut best = f64::NEG_INFINITY;
        let mut best_theta = 0.0;
        let mut heap = BinaryHeap::with_capacity(grid.len());
        let absorb = |e: Evaluated, heap: &mut BinaryHeap<Cell>, best: &mut f64, best_theta: &mut f64| {
            let (key, s) = match side {
                Side::Sup => (e.sup_key, e.sample),
                Side::Inf => (e.inf_key, -e.sample),
            };
            if s > *best {
                *best = s;
                *best_theta = e.theta;
            }
            if let Some(arc) = e.arc {
                heap.push(Cell { arc, key });
            }
        };
        let mut cells = grid.iter().filter(|e| e.arc.is_some()).count();
        for e in grid {
            absorb(e, &mut heap, &mut best, &mut best_theta);
        }
        for orbit in &self.seeds {
            let v = self.log_cocycle_periodic(orbit);
            let v = if side == Side::Sup { v } else { -v };
            if v > best {
                best = v;
                best_theta = orbit[0].arg();
            }
        }
        let mut converged = false;
        loop {
            let top = heap.peek().map(|c| c.key).unwrap_or(f64::NEG_INFINITY);
            if top - best <= n * eps || top == f64::NEG_INFINITY {
                converged = true;
                break;
            }
            if cells >= self.budget {
                break;
            }
            let mut batch = Vec::with_capacity(BATCH);
            while batch.len() < BATCH {
                match heap.peek() {
                    Some(c) if c.key - best > n * eps => batch.push(heap.pop().unwrap()),
                    _ => break,
                }
            }
            let children: Vec<Evaluated> = batch
                .par_iter()
                .flat_map_iter(|c| {
                    let (l, r) = c.arc.split();
                    [l, r]
                })
                .map(|arc| self.evaluate(arc, sup, inf))
                .collect();
            cells += children.len();
            for e in children {
                absorb(e, &mut heap, &mut best, &mut best_theta);
            }
        }
        let top = heap.peek().map(|c| c.key).unwrap_or(f64::NEG_INFINITY);
        let (bound, sample) = match side {
            Side::Sup => ((top.max(best) / n).exp(), (best / n).exp()),
            Side::Inf => ((-top.max(best) / n).exp(), (-best / n).exp()),
        };
        CertifiedBound {
            bound,
            sample,
            witness_theta: best_theta.rem_euclid(TAU),
            n: self.n,
            cells,
            converged,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Evaluated {
    /// `None` for sample-only points.
    arc: Option<Arc>,
    sup_key: f64,
    inf_key: f64,
    sample: f64,
    theta: f64,
}

/// Geometric mean of `|w|` over a verified periodic orbit: a lower bound for
/// `ρ(T)` (and an upper bound for `ρ_min(T)` when `φ` is invertible).
pub fn rho_lower_periodic(weight: &WeightPoly, map: &dyn CircleMap, orbit: &[Complex64], tol: f64) -> Result<f64> {
    if orbit.is_empty() {
        return Err(Error::Invalid("empty orbit".into()));
    }
    let p = orbit.len();
    for k in 0..p {
        let next = orbit[(k + 1) % p];
        let err = (map.apply(orbit[k]) - next).norm();
        if !(err < tol) {
            return Err(Error::Invalid(format!(
                "orbit step {k} misses the next point by {err:e} (tolerance {tol:e})"
            )));
        }
    }
    let mut logs = Vec::with_capacity(p);
    for &z in orbit {
        let m = weight.eval(z).norm();
        if m < UNDERFLOW_FLOOR {
            return Ok(0.0);
        }
        logs.push(m.ln());
    }
    Ok((pairwise_sum(&logs) / p as f64).exp())
}

/// Budgets for the disc-automorphism oracle. `n = None` picks a length from
/// the map class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleOptions {
    pub n: Option<usize>,
    pub sample_grid: usize,
    pub eps: f64,
    pub budget: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            n: None,
            sample_grid: 2048,
            eps: 1e-3,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl OracleOptions {
    pub fn length_for(&self, class: &MapClass) -> usize {
        if let Some(n) = self.n {
            return n.max(1);
        }
        match class {
            MapClass::Identity => 1,
            // φ^m = id, so w_{km} = w_m^k and n = m is already exact.
            MapClass::EllipticRational { m, .. } => *m as usize,
            MapClass::EllipticIrrational { .. } => 4096,
            MapClass::Parabolic { .. } => 10_000,
            MapClass::Hyperbolic { .. } => 60,
        }
    }
}

/// Enclosures of `ρ(T)` and `ρ_min(T)` for `T = w·T_φ`, `φ` a disk
/// automorphism. Lower bounds for `ρ` and upper bounds for `ρ_min` come
/// from periodic boundary points; the other two sides from [`CocycleProbe`].
pub fn disc_enclosures(
    map: &MoebiusMap,
    class: &MapClass,
    weight: &WeightPoly,
    opts: &OracleOptions,
) -> Result<(RadiusEnclosure, RadiusEnclosure)> {
    let n = opts.length_for(class);
    let seeds: Vec<Vec<Complex64>> = match class {
        MapClass::Parabolic { zeta } => vec![vec![*zeta]],
        MapClass::Hyperbolic { zeta1, zeta2, .. } => vec![vec![*zeta1], vec![*zeta2]],
        _ => Vec::new(),
    };
    let probe = CocycleProbe::new(map, weight, n, opts.sample_grid)?
        .with_budget(opts.budget)
        .with_periodic_seeds(&seeds);
    let (up, lo_min) = probe.certify_both(opts.eps);

    let mut rho = RadiusEnclosure {
        lower: lo_min.bound,
        upper: up.bound,
        witnesses: vec![format!(
            "upper: sup-cocycle certificate n={n}, cells={}, converged={}",
            up.cells, up.converged
        )],
        certified: true,
    };
    let mut rho_min = RadiusEnclosure {
        lower: lo_min.bound,
        upper: up.bound,
        witnesses: vec![format!(
            "lower: inf-cocycle certificate n={n}, cells={}, converged={}",
            lo_min.cells, lo_min.converged
        )],
        certified: true,
    };

    let mut periodic = |orbit: &[Complex64], label: String| -> Result<()> {
        let v = rho_lower_periodic(weight, map, orbit, 1e-9)?;
        if v > rho.lower {
            rho.lower = v;
            rho.witnesses.push(format!("lower: {label} mean {v}"));
        }
        if v < rho_min.upper {
            rho_min.upper = v;
            rho_min.witnesses.push(format!("upper: {label} mean {v}"));
        }
        Ok(())
    };
    match class {
        MapClass::Parabolic { zeta } => periodic(&[*zeta], format!("fixed point {zeta}"))?,
        MapClass::Hyperbolic { zeta1, zeta2, .. } => {
            periodic(&[*zeta1], format!("fixed point {zeta1}"))?;
            periodic(&[*zeta2], format!("fixed point {zeta2}"))?;
        }
        MapClass::Identity | MapClass::EllipticRational { .. } => {
            // Every boundary point is periodic with period dividing n; the
            // sampled extremes are exact orbit means.
            let p = n;
            let t_max = Complex64::cis(up.witness_theta);
            let t_min = Complex64::cis(lo_min.witness_theta);
            for (t, what) in [(t_max, "max"), (t_min, "min")] {
                let orbit: Vec<Complex64> = map.orbit(t, p - 1);
                periodic(&orbit, format!("period-{p} orbit through {t} ({what} sample)"))?;
            }
        }
        MapClass::EllipticIrrational { .. } => {
            rho.witnesses.push("lower: ρ ≥ ρ_min (no boundary periodic orbits)".into());
            rho_min.witnesses.push("upper: ρ_min ≤ ρ (no boundary periodic orbits)".into());
        }
    }
    for e in [&mut rho, &mut rho_min] {
        if e.lower > e.upper {
            // Rounding in the certificates; widen symmetrically.
            let mid = 0.5 * (e.lower + e.upper);
            e.lower = mid.min(e.lower);
            e.upper = mid.max(e.upper);
        }
    }
    Ok((rho, rho_min))
}

/// Enclosure of `ρ_min(T)` at cocycle length `n` with `samples` grid cells.
pub fn rho_min_estimate(weight: &WeightPoly, map: &MoebiusMap, n: usize, samples: usize) -> Result<RadiusEnclosure> {
    let class = map.classify(crate::moebius::DEFAULT_TOL, crate::moebius::DEFAULT_M_MAX)?;
    let opts = OracleOptions {
        n: Some(n),
        sample_grid: samples,
        ..OracleOptions::default()
    };
    Ok(disc_enclosures(map, &class, weight, &opts)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    struct Square;
    impl CircleMap for Square {
        fn apply(&self, z: Complex64) -> Complex64 {
            z * z
        }
        fn derivative(&self, z: Complex64) -> Complex64 {
            2.0 * z
        }
        fn image_arc(&self, arc: &Arc) -> Arc {
            Arc::new(2.0 * arc.start(), 2.0 * arc.len()).padded(1e-12)
        }
    }

    #[test]
    fn log_cocycle_examples() {
        let id = MoebiusMap::identity();
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        let p = CocycleProbe::new(&id, &w, 3, 8).unwrap();
        assert_eq!(p.log_cocycle(c(1.0, 0.0)), 0.0);

        let rot = MoebiusMap::rotation(1.234);
        let w = WeightPoly::from_real(&[0.0, 1.0]).unwrap();
        let p = CocycleProbe::new(&rot, &w, 17, 8).unwrap();
        assert!(p.log_cocycle(Complex64::cis(0.3)).abs() < 1e-14);

        let w = WeightPoly::from_real(&[0.5, -0.5]).unwrap();
        let p = CocycleProbe::new(&Square, &w, 2, 8).unwrap();
        let omega = Complex64::cis(TAU / 3.0);
        assert!((p.log_cocycle(omega) - 0.75f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn upper_bound_examples() {
        let w = WeightPoly::from_real(&[0.5, 0.5]).unwrap();
        for n in [1, 5, 20] {
            let b = CocycleProbe::new(&Square, &w, n, 64).unwrap().rho_upper_certified(1e-6);
            assert_eq!(b.bound, 1.0);
        }

        let w = WeightPoly::constant(c(0.0, -1.7)).unwrap();
        let rot = MoebiusMap::rotation(0.77);
        let b = CocycleProbe::new(&rot, &w, 9, 16).unwrap().rho_upper_certified(1e-9);
        assert!((b.bound - 1.7).abs() < 1e-12);

        let hyp = MoebiusMap::new(c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        let b = CocycleProbe::new(&hyp, &w, 40, 256).unwrap().rho_upper_certified(1e-4);
        assert!(b.bound >= 3.0 - 1e-12 && b.bound <= 3.2, "{b:?}");
    }

    #[test]
    fn periodic_lower_bounds() {
        let w = WeightPoly::from_real(&[0.5, -0.5]).unwrap();
        let omega = Complex64::cis(TAU / 3.0);
        let v = rho_lower_periodic(&w, &Square, &[omega, omega * omega], 1e-12).unwrap();
        assert!((v - 0.75f64.sqrt()).abs() < 1e-12);

        let w = WeightPoly::from_real(&[0.5, 0.5]).unwrap();
        assert_eq!(rho_lower_periodic(&w, &Square, &[c(1.0, 0.0)], 1e-12).unwrap(), 1.0);

        let w = WeightPoly::constant(c(3.0, 4.0)).unwrap();
        let v = rho_lower_periodic(&w, &Square, &[omega, omega * omega], 1e-12).unwrap();
        assert!((v - 5.0).abs() < 1e-12);

        assert!(rho_lower_periodic(&w, &Square, &[c(0.0, 1.0)], 1e-12).is_err());
    }

    #[test]
    fn min_lower_bound_hyperbolic() {
        let hyp = MoebiusMap::new(c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        let b = CocycleProbe::new(&hyp, &w, 40, 256).unwrap().rho_min_lower_certified(1e-4);
        assert!(b.bound <= 1.0 + 1e-12 && b.bound > 0.99, "{b:?}");
    }

    #[test]
    fn circle_zero_forces_zero_min() {
        let w = WeightPoly::from_real(&[0.5, -0.5]).unwrap();
        let b = CocycleProbe::new(&Square, &w, 4, 16).unwrap().rho_min_lower_certified(1e-6);
        assert_eq!(b.bound, 0.0);
    }

    #[test]
    fn rho_min_examples() {
        let hyp = MoebiusMap::new(c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        let e = rho_min_estimate(&w, &hyp, 40, 256).unwrap();
        assert!(e.contains(1.0, 1e-12) && e.width() < 1e-2, "{e:?}");

        let w = WeightPoly::constant(c(0.6, 0.8)).unwrap();
        let e = rho_min_estimate(&w, &hyp, 10, 16).unwrap();
        assert!((e.lower - 1.0).abs() < 1e-12 && (e.upper - 1.0).abs() < 1e-12);

        let rot = MoebiusMap::rotation(2f64.sqrt() * std::f64::consts::PI);
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        let e = rho_min_estimate(&w, &rot, 4096, 2048).unwrap();
        assert!(e.contains(2.0, 0.0) && e.width() < 2e-2, "{e:?}");
    }
}
