//! Deterministic SVG scatter of a spectrum in the λ plane.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write;

use dissipspec_core::regions::RegionSpec;
use dissipspec_core::spectrum::SpectrumReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;
pub const BOUNDARY_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
struct View {
    x0: f64,
    x1: f64,
    y: f64,
}

impl View {
    fn for_report(report: &SpectrumReport) -> Self {
        let min_re = report.eigenvalues.iter().map(|e| e.lambda.re).fold(0.0, f64::min);
        let max_im = report.eigenvalues.iter().map(|e| e.lambda.im.abs()).fold(0.0, f64::max);
        let span = if min_re < 0.0 { -1.1 * min_re } else { 1.0 };
        Self { x0: -span, x1: 0.05 * span, y: (1.1 * max_im).max(0.25 * span) }
    }

    fn inside(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y.abs() <= self.y
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT / 2.0 - y / self.y * (HEIGHT / 2.0 - MARGIN)
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| a + (b - a) * k as f64 / (n - 1) as f64)
}

/// Boundary curves of `region` as point lists in the λ plane.
fn boundary(region: &RegionSpec, view: &View) -> Vec<Vec<(f64, f64)>> {
    let n = BOUNDARY_SAMPLES;
    let rn_curves = |order: u32, c: f64| {
        let upper: Vec<(f64, f64)> =
            linspace(view.x0, 0.0, n).map(|x| (x, c * (x.abs() + 1.0).powi(-(order as i32)))).collect();
        let lower = upper.iter().map(|&(x, y)| (x, -y)).collect();
        vec![upper, lower]
    };
    match *region {
        RegionSpec::LambdaEps { eps, c } => vec![linspace(-view.y, view.y, n)
            .map(|y| (-c * (y.abs().powf(0.5 + eps) + 1.0), y))
            .collect()],
        RegionSpec::Rn { n: order, c } => rn_curves(order, c),
        RegionSpec::DiscPlusRn { r0, n: order, c } => {
            let mut curves = rn_curves(order, c);
            curves.push(
                linspace(FRAC_PI_2, 3.0 * FRAC_PI_2, n).map(|t| (r0 * t.cos(), r0 * t.sin())).collect(),
            );
            curves
        }
        RegionSpec::Sector { gamma } => {
            let reach = 2.0 * view.x0.abs().max(view.y);
            let radius = |t: f64| t.cos() / ((1.0 - gamma) * (2.0 * t).cos());
            let upper: Vec<(f64, f64)> = linspace(FRAC_PI_2, 3.0 * FRAC_PI_4, n + 2)
                .skip(1)
                .take(n)
                .map(|t| (radius(t).min(reach) * t.cos(), radius(t).min(reach) * t.sin()))
                .collect();
            let lower = upper.iter().map(|&(x, y)| (x, -y)).collect();
            let ray = |t: f64| linspace(0.0, reach, n).map(|r| (r * t.cos(), r * t.sin())).collect();
            vec![upper, lower, ray(3.0 * FRAC_PI_4), ray(5.0 * FRAC_PI_4)]
        }
        RegionSpec::RealRay { gamma, .. } => {
            if gamma > 1.0 {
                vec![linspace(-1.0 / (gamma - 1.0), view.x0, n).map(|x| (x, 0.0)).collect()]
            } else {
                Vec::new()
            }
        }
    }
}

/// Splits a curve into runs of points inside the view.
fn clip(curve: &[(f64, f64)], view: &View) -> Vec<Vec<(f64, f64)>> {
    let mut runs = Vec::new();
    let mut run = Vec::new();
    for &(x, y) in curve {
        if x.is_finite() && y.is_finite() && view.inside(x, y) {
            run.push((x, y));
        } else if !run.is_empty() {
            runs.push(std::mem::take(&mut run));
        }
    }
    if !run.is_empty() {
        runs.push(run);
    }
    runs.retain(|r| r.len() >= 2);
    runs
}

fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag)
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub fn render(report: &SpectrumReport, region: Option<&RegionSpec>) -> String {
    let view = View::for_report(report);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let title = if report.gamma < 1.0 {
        format!("Eigenvalues, 0 &lt; γ = {} &lt; 1", report.gamma)
    } else {
        format!("Eigenvalues, γ = {}", report.gamma)
    };
    let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle">{title}</text>"#, WIDTH / 2.0);

    // Frame, axes and ticks.
    let (left, right) = (view.px(view.x0), view.px(view.x1));
    let (top, bottom) = (view.py(view.y), view.py(-view.y));
    let _ = writeln!(
        svg,
        r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{left:.2}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}" stroke="#999"/>"##,
        y = view.py(0.0)
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{x:.2}" y1="{top:.2}" x2="{x:.2}" y2="{bottom:.2}" stroke="#999"/>"##,
        x = view.px(0.0)
    );
    for t in ticks(view.x0, view.x1) {
        let x = view.px(t);
        let _ = writeln!(svg, r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, bottom + 4.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, bottom + 18.0, label(t));
    }
    for t in ticks(-view.y, view.y) {
        let y = view.py(t);
        let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="black"/>"#, left - 4.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, y + 4.0, label(t));
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Re λ</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">Im λ</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    if let Some(region) = region {
        for curve in boundary(region, &view) {
            for run in clip(&curve, &view) {
                let pts: Vec<String> =
                    run.iter().map(|&(x, y)| format!("{:.2},{:.2}", view.px(x), view.py(y))).collect();
                let _ = writeln!(
                    svg,
                    r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-dasharray="4 3"/>"##,
                    pts.join(" ")
                );
            }
        }
    }

    for e in &report.eigenvalues {
        if view.inside(e.lambda.re, e.lambda.im) {
            let _ = writeln!(
                svg,
                r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#1f4e9c"/>"##,
                view.px(e.lambda.re),
                view.py(e.lambda.im)
            );
        }
    }
    if report.eigenvalues.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">0 eigenvalues</text>"#,
            WIDTH / 2.0,
            MARGIN + 20.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
