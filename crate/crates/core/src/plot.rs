//! Deterministic SVG rendering of spectral sets.

use num_complex::Complex64;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::region::{Membership, SpectralSet, SpectrumEntry};
use crate::spectra::SpectrumReport;

const PANEL: f64 = 360.0;
const MARGIN: f64 = 28.0;
const IN_FILL: &str = "#3b6fb6";
const IN_STROKE: &str = "#1c3d6e";
const UNKNOWN_FILL: &str = "#c8c8c8";
const UNKNOWN_STROKE: &str = "#808080";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max) || ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::Invalid(format!("empty plot window [{x_min}, {x_max}]×[{y_min}, {y_max}]")));
        }
        Ok(Self { x_min, x_max, y_min, y_max })
    }

    /// Square window around the origin, 20% beyond the largest radius.
    pub fn fit(report: &SpectrumReport) -> Self {
        let r = report
            .spectra
            .entries()
            .iter()
            .flat_map(|(_, e)| e.sets())
            .filter_map(|s| s.outer_radius())
            .fold(0.0f64, f64::max);
        let r = if r > 0.0 && r.is_finite() { 1.2 * r } else { 1.0 };
        Self {
            x_min: -r,
            x_max: r,
            y_min: -r,
            y_max: r,
        }
    }

    fn min_abs(&self) -> f64 {
        let cx = 0f64.clamp(self.x_min, self.x_max);
        let cy = 0f64.clamp(self.y_min, self.y_max);
        cx.hypot(cy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOptions {
    pub window: Option<Window>,
    /// Grid points per side for membership-sampled regions.
    pub resolution: usize,
    /// Spectrum names to draw, e.g. `sigma`; empty means all seven.
    pub spectra: Vec<String>,
    pub tol: f64,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            window: None,
            resolution: 121,
            spectra: Vec::new(),
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub svg: String,
    pub warnings: Vec<String>,
}

struct Frame {
    win: Window,
    ox: f64,
    oy: f64,
    scale_x: f64,
    scale_y: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        self.ox + (x - self.win.x_min) * self.scale_x
    }
    fn y(&self, y: f64) -> f64 {
        self.oy + (self.win.y_max - y) * self.scale_y
    }
    fn r(&self, r: f64) -> f64 {
        r * self.scale_x
    }
}

#[derive(Clone, Copy)]
enum Style {
    In,
    Unknown,
}

impl Style {
    fn fill(self) -> &'static str {
        match self {
            Style::In => IN_FILL,
            Style::Unknown => UNKNOWN_FILL,
        }
    }
    fn stroke(self) -> &'static str {
        match self {
            Style::In => IN_STROKE,
            Style::Unknown => UNKNOWN_STROKE,
        }
    }
}

fn f(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn draw_set(out: &mut String, fr: &Frame, set: &SpectralSet, style: Style, opts: &PlotOptions) {
    let (cx, cy) = (fr.x(0.0), fr.y(0.0));
    match set {
        SpectralSet::Empty => {}
        SpectralSet::Origin => {
            let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="3" fill="{}"/>"#, f(cx), f(cy), style.stroke());
        }
        SpectralSet::Circle { r } => {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
                f(cx),
                f(cy),
                f(fr.r(*r)),
                style.stroke()
            );
        }
        SpectralSet::Disk { r } => {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="{}" fill="{}" fill-opacity="0.6" stroke="{}" stroke-width="1.5"/>"#,
                f(cx),
                f(cy),
                f(fr.r(*r)),
                style.fill(),
                style.stroke()
            );
        }
        SpectralSet::Annulus { r1, r2 } => {
            let (a, b) = (fr.r(*r1), fr.r(*r2));
            let _ = writeln!(
                out,
                r#"<path d="M {x0} {cy} a {b} {b} 0 1 0 {d2} 0 a {b} {b} 0 1 0 -{d2} 0 Z M {x1} {cy} a {a} {a} 0 1 0 {d1} 0 a {a} {a} 0 1 0 -{d1} 0 Z" fill="{fill}" fill-opacity="0.6" fill-rule="evenodd"/>"#,
                x0 = f(cx - b),
                x1 = f(cx - a),
                cy = f(cy),
                a = f(a),
                b = f(b),
                d1 = f(2.0 * a),
                d2 = f(2.0 * b),
                fill = style.fill()
            );
            for r in [a, b] {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
                    f(cx),
                    f(cy),
                    f(r),
                    style.stroke()
                );
            }
        }
        SpectralSet::Points { points } => {
            for p in points {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="3" fill="{}"/>"#,
                    f(fr.x(p.re)),
                    f(fr.y(p.im)),
                    style.stroke()
                );
            }
        }
        SpectralSet::Union { sets } => {
            for s in sets {
                draw_set(out, fr, s, style, opts);
            }
        }
        SpectralSet::RootPreimage { .. } => sample_set(out, fr, set, style, opts),
    }
}

/// Grid cells coloured by membership of their centres.
fn sample_set(out: &mut String, fr: &Frame, set: &SpectralSet, style: Style, opts: &PlotOptions) {
    let n = opts.resolution.max(2);
    let w = &fr.win;
    let dx = (w.x_max - w.x_min) / n as f64;
    let dy = (w.y_max - w.y_min) / n as f64;
    let (pw, ph) = (dx * fr.scale_x, dy * fr.scale_y);
    let _ = writeln!(out, "<g shape-rendering=\"crispEdges\">");
    for j in 0..n {
        for i in 0..n {
            let x = w.x_min + (i as f64 + 0.5) * dx;
            let y = w.y_max - (j as f64 + 0.5) * dy;
            let fill = match set.membership(Complex64::new(x, y), opts.tol) {
                Membership::In => style.fill(),
                Membership::Unknown => UNKNOWN_FILL,
                Membership::Out => continue,
            };
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
                f(fr.x(x - 0.5 * dx)),
                f(fr.y(y + 0.5 * dy)),
                f(pw),
                f(ph)
            );
        }
    }
    let _ = writeln!(out, "</g>");
}

fn visible(set: &SpectralSet, win: &Window) -> bool {
    match set.outer_radius() {
        Some(r) => r >= win.min_abs(),
        None => !matches!(set, SpectralSet::Empty),
    }
}

fn draw_entry(out: &mut String, fr: &Frame, entry: &SpectrumEntry, opts: &PlotOptions) {
    match entry {
        SpectrumEntry::Exact { set } => draw_set(out, fr, set, Style::In, opts),
        SpectrumEntry::ContainsAtLeast { inner, outer } => {
            if let Some(o) = outer {
                draw_set(out, fr, o, Style::Unknown, opts);
            }
            draw_set(out, fr, inner, Style::In, opts);
        }
        SpectrumEntry::Unknown { outer } => {
            if let Some(o) = outer {
                draw_set(out, fr, o, Style::Unknown, opts);
            }
        }
    }
}

const NAMES: [(&str, &str); 7] = [
    ("sigma", "σ"),
    ("sigma_ap", "σ_ap"),
    ("sigma_usf", "σ_usf"),
    ("sigma_lsf", "σ_lsf"),
    ("sigma_sf", "σ_sf"),
    ("sigma_f", "σ_f"),
    ("sigma_w", "σ_w"),
];

/// One panel per selected spectrum with a shared legend.
pub fn render(report: &SpectrumReport, opts: &PlotOptions) -> Result<Plot> {
    let win = opts.window.unwrap_or_else(|| Window::fit(report));
    let entries = report.spectra.entries();
    let mut chosen = Vec::new();
    for (key, entry) in entries.iter() {
        if opts.spectra.is_empty() || opts.spectra.iter().any(|s| s == key) {
            let label = NAMES.iter().find(|n| n.0 == *key).map(|n| n.1).unwrap_or(key);
            chosen.push((label, *entry));
        }
    }
    if let Some(bad) = opts.spectra.iter().find(|s| !NAMES.iter().any(|n| n.0 == s.as_str())) {
        return Err(Error::Invalid(format!(
            "unknown spectrum {bad:?}; expected one of {}",
            NAMES.map(|n| n.0).join(", ")
        )));
    }
    let mut warnings = Vec::new();
    let any_visible = chosen.iter().any(|(_, e)| e.sets().iter().any(|s| visible(s, &win)));
    if !any_visible {
        warnings.push("the plot window excludes every spectral set; the canvas is empty".into());
    }
    let cols = chosen.len().min(4).max(1);
    let rows = chosen.len().div_ceil(cols).max(1);
    let aspect = (win.y_max - win.y_min) / (win.x_max - win.x_min);
    let pw = PANEL;
    let ph = PANEL * aspect;
    let width = cols as f64 * (pw + MARGIN) + MARGIN;
    let legend_h = 40.0;
    let height = rows as f64 * (ph + 2.0 * MARGIN) + legend_h;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="13">"#,
        f(width),
        f(height),
        f(width),
        f(height)
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        "<title>{} {}</title>",
        escape(&report.case_tag),
        escape(&format!("{:?}", report.algebra))
    );
    for (k, (label, entry)) in chosen.iter().enumerate() {
        let (c, r) = (k % cols, k / cols);
        let fr = Frame {
            win,
            ox: MARGIN + c as f64 * (pw + MARGIN),
            oy: 2.0 * MARGIN + r as f64 * (ph + 2.0 * MARGIN) - MARGIN * 0.5,
            scale_x: pw / (win.x_max - win.x_min),
            scale_y: ph / (win.y_max - win.y_min),
        };
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{} [{}]</text>"#,
            f(fr.ox),
            f(fr.oy - 8.0),
            escape(label),
            escape(status(entry))
        );
        let _ = writeln!(out, r#"<svg x="{}" y="{}" width="{}" height="{}" overflow="hidden">"#, f(fr.ox), f(fr.oy), f(pw), f(ph));
        let local = Frame { ox: 0.0, oy: 0.0, ..fr };
        let _ = writeln!(out, r#"<rect width="{}" height="{}" fill="none" stroke="black"/>"#, f(pw), f(ph));
        // axes
        if win.x_min <= 0.0 && win.x_max >= 0.0 {
            let x = f(local.x(0.0));
            let _ = writeln!(out, r##"<line x1="{x}" y1="0" x2="{x}" y2="{}" stroke="#999" stroke-width="0.5"/>"##, f(ph));
        }
        if win.y_min <= 0.0 && win.y_max >= 0.0 {
            let y = f(local.y(0.0));
            let _ = writeln!(out, r##"<line x1="0" y1="{y}" x2="{}" y2="{y}" stroke="#999" stroke-width="0.5"/>"##, f(pw));
        }
        if any_visible {
            draw_entry(&mut out, &local, entry, opts);
        }
        let _ = writeln!(out, "</svg>");
    }
    let ly = height - legend_h + 14.0;
    let _ = writeln!(out, r#"<rect x="{}" y="{}" width="14" height="14" fill="{IN_FILL}"/>"#, f(MARGIN), f(ly));
    let _ = writeln!(out, r#"<text x="{}" y="{}">in the set</text>"#, f(MARGIN + 20.0), f(ly + 12.0));
    let _ = writeln!(out, r#"<rect x="{}" y="{}" width="14" height="14" fill="{UNKNOWN_FILL}"/>"#, f(MARGIN + 120.0), f(ly));
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">unknown (outer bound)</text>"#,
        f(MARGIN + 140.0),
        f(ly + 12.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">window [{}, {}]×[{}, {}]</text>"#,
        f(MARGIN + 320.0),
        f(ly + 12.0),
        f(win.x_min),
        f(win.x_max),
        f(win.y_min),
        f(win.y_max)
    );
    let _ = writeln!(out, "</svg>");
    Ok(Plot { svg: out, warnings })
}

fn status(e: &SpectrumEntry) -> &'static str {
    match e {
        SpectrumEntry::Exact { .. } => "exact",
        SpectrumEntry::ContainsAtLeast { .. } => "contains at least",
        SpectrumEntry::Unknown { .. } => "unknown",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::MoebiusMap;
    use crate::spectra::{analyze_disc, AnalyzeOptions, Spectra};
    use crate::weight::WeightPoly;

    fn hyperbolic_report() -> SpectrumReport {
        let map = MoebiusMap::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let w = WeightPoly::from_real(&[-2.0, 1.0]).unwrap();
        analyze_disc(&map, &w, &AnalyzeOptions::default()).unwrap()
    }

    #[test]
    fn annulus_panel() {
        let r = hyperbolic_report();
        let opts = PlotOptions {
            spectra: vec!["sigma".into()],
            ..PlotOptions::default()
        };
        let p = render(&r, &opts).unwrap();
        assert!(p.warnings.is_empty());
        assert!(p.svg.contains("fill-rule=\"evenodd\""));
        assert_eq!(p.svg.matches("fill=\"none\" stroke=\"#1c3d6e\"").count(), 2);
        assert_eq!(render(&r, &opts).unwrap().svg, p.svg);
    }

    #[test]
    fn circle_and_empty_window() {
        let mut r = hyperbolic_report();
        r.spectra = Spectra::uniform(SpectralSet::circle(2.0));
        let opts = PlotOptions {
            spectra: vec!["sigma".into()],
            ..PlotOptions::default()
        };
        let p = render(&r, &opts).unwrap();
        assert_eq!(p.svg.matches("<circle").count(), 1);
        let far = PlotOptions {
            window: Some(Window::new(5.0, 6.0, 5.0, 6.0).unwrap()),
            ..opts
        };
        let p = render(&r, &far).unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.svg.matches("<circle").count(), 0);
    }

    #[test]
    fn sampled_region() {
        let map = MoebiusMap::rotation(std::f64::consts::PI);
        let w = WeightPoly::from_real(&[0.0, 1.0]).unwrap();
        let r = analyze_disc(&map, &w, &AnalyzeOptions::default()).unwrap();
        let opts = PlotOptions {
            spectra: vec!["sigma".into()],
            resolution: 21,
            ..PlotOptions::default()
        };
        let p = render(&r, &opts).unwrap();
        assert!(p.svg.contains("<rect x="));
        assert!(render(&r, &PlotOptions { spectra: vec!["nope".into()], ..opts }).is_err());
    }
}
