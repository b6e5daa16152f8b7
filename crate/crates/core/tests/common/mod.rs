//! Operator generators shared by the acceptance gate and the property suites.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

use wcospec_core::blaschke::{analyze_endomorphism, BlaschkeProduct, EndomorphismOptions};
use wcospec_core::moebius::{MoebiusMap, Rationality};
use wcospec_core::polydisc::{analyze_polydisc, IndependenceClaim, PolydiscOptions, TorusRotation, WeightPolyN};
use wcospec_core::region::SpectralSet;
use wcospec_core::spectra::{analyze_disc, AnalyzeOptions, SpectrumReport};
use wcospec_core::weight::WeightPoly;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(z + 1/2)/(1 + z/2)`.
pub fn hyperbolic() -> MoebiusMap {
    MoebiusMap::new(c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap()
}

/// `((2i − 1)z + 1)/(−z + (1 + 2i))`.
pub fn parabolic() -> MoebiusMap {
    MoebiusMap::new(c(-1.0, 2.0), c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 2.0)).unwrap()
}

/// `ψ(z) = e^{iβ} φ(e^{−iβ} z)`.
pub fn rotate_conj(m: &MoebiusMap, beta: f64) -> MoebiusMap {
    let r = MoebiusMap::rotation(beta);
    r.compose(m).compose(&r.inverse())
}

/// `(z + t)/(1 + t z)` conjugated by a rotation; fixed points `±e^{iβ}`,
/// attracting at `e^{iβ}`.
pub fn hyperbolic_family(t: f64, beta: f64) -> MoebiusMap {
    let m = MoebiusMap::from_coefficients(c(1.0, 0.0), c(t, 0.0), c(t, 0.0), c(1.0, 0.0));
    rotate_conj(&m, beta)
}

fn unit_root(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::cis(rng.gen_range(0.0..TAU))
}

fn root_with_modulus(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    unit_root(rng) * rng.gen_range(lo..hi)
}

/// Weight whose roots are placed to reach a given branch: `kind` 0 has all
/// roots outside the closed disk, 1 one root inside, 2 one root at `on`.
pub fn branch_weight(rng: &mut ChaCha8Rng, kind: u32, on: Complex64) -> WeightPoly {
    let mut roots = vec![root_with_modulus(rng, 1.5, 3.0)];
    match kind {
        0 => roots.push(root_with_modulus(rng, 1.5, 4.0)),
        1 => roots.push(root_with_modulus(rng, 0.0, 0.7)),
        _ => roots.push(on),
    }
    let lead = root_with_modulus(rng, 0.5, 2.0);
    WeightPoly::from_roots(lead, &roots).unwrap()
}

/// Reports spanning every disc branch, plus polydisc and endomorphism
/// operators. Each entry carries a short label.
pub fn random_reports(rng: &mut ChaCha8Rng, count: usize) -> Vec<(String, SpectrumReport)> {
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < count {
        let kind = (k % 3) as u32;
        let label;
        let report = match k % 8 {
            0 | 1 => {
                let t = rng.gen_range(0.2..0.8);
                let beta = rng.gen_range(0.0..TAU);
                let map = hyperbolic_family(t, beta);
                // circle roots at ζ₂ or at a generic point
                let on = if rng.gen_bool(0.5) { -Complex64::cis(beta) } else { unit_root(rng) };
                let w = branch_weight(rng, kind, on);
                label = format!("hyperbolic t={t:.3} kind={kind}");
                analyze_disc(&map, &w, &AnalyzeOptions::default())
            }
            2 => {
                let beta = rng.gen_range(0.0..TAU);
                let map = rotate_conj(&parabolic(), beta);
                let w = branch_weight(rng, kind, Complex64::cis(beta));
                label = format!("parabolic kind={kind}");
                analyze_disc(&map, &w, &AnalyzeOptions::default())
            }
            3 => {
                let m = rng.gen_range(2..6u32);
                let z0 = root_with_modulus(rng, 0.0, 0.6);
                let map = MoebiusMap::elliptic(z0, TAU / m as f64);
                let w = {
                    let on = unit_root(rng);
                    branch_weight(rng, kind, on)
                };
                label = format!("elliptic rational m={m}");
                analyze_disc(&map, &w, &AnalyzeOptions::default())
            }
            4 => {
                let z0 = root_with_modulus(rng, 0.0, 0.6);
                let map = MoebiusMap::elliptic(z0, TAU * (5f64.sqrt() - 1.0) / 2.0);
                let w = if rng.gen_bool(0.3) {
                    WeightPoly::from_roots(c(1.0, 0.0), &[z0, root_with_modulus(rng, 1.5, 3.0)]).unwrap()
                } else {
                    {
                    let on = unit_root(rng);
                    branch_weight(rng, kind, on)
                }
                };
                let opts = AnalyzeOptions {
                    rationality: Rationality::DeclareIrrational,
                    ..AnalyzeOptions::default()
                };
                label = format!("elliptic irrational kind={kind}");
                analyze_disc(&map, &w, &opts)
            }
            5 => {
                let map = MoebiusMap::identity();
                let w = {
                    let on = unit_root(rng);
                    branch_weight(rng, kind, on)
                };
                label = "identity".into();
                analyze_disc(&map, &w, &AnalyzeOptions::default())
            }
            6 => {
                let rot = TorusRotation::new(vec![2f64.sqrt() * PI, 3f64.sqrt() * PI], IndependenceClaim::Declared).unwrap();
                let c0 = rng.gen_range(0.5..4.0);
                let w = WeightPolyN::from_terms(
                    2,
                    &[
                        (vec![0, 0], c(c0, 0.0)),
                        (vec![1, 0], c(1.0, 0.0)),
                        (vec![0, 1], c(1.0, 0.0)),
                    ],
                )
                .unwrap();
                label = format!("polydisc c0={c0:.3}");
                analyze_polydisc(&rot, &w, &PolydiscOptions::default())
            }
            _ => {
                let d = if rng.gen_bool(0.5) { 2 } else { 3 };
                let b = BlaschkeProduct::power(d).unwrap();
                let w = {
                    let on = unit_root(rng);
                    branch_weight(rng, kind, on)
                };
                let opts = EndomorphismOptions {
                    n_max: 4,
                    p_max: 4,
                    sample_grid: 256,
                    ..EndomorphismOptions::default()
                };
                label = format!("endomorphism z^{d}");
                analyze_endomorphism(&w, &b, &opts)
            }
        };
        k += 1;
        out.push((label, report.expect("analysis")));
    }
    out
}

/// Radii worth probing for a set: its boundary circles, jittered.
pub fn probe_radii(set: &SpectralSet, out: &mut Vec<f64>) {
    match set {
        SpectralSet::Circle { r } | SpectralSet::Disk { r } => out.push(*r),
        SpectralSet::Annulus { r1, r2 } => out.extend([*r1, *r2, 0.5 * (r1 + r2)]),
        SpectralSet::Union { sets } => sets.iter().for_each(|s| probe_radii(s, out)),
        SpectralSet::Points { points } => out.extend(points.iter().map(|p| p.norm())),
        SpectralSet::RootPreimage { .. } | SpectralSet::Origin | SpectralSet::Empty => {}
    }
}
