//! Grid verification of the scalar inequalities behind the ellipticity
//! arguments: bounds on `ρ = √(z − r₀)`, the three cases for
//! `c = ρ − γ√z` when `0 < γ < 1`, and positivity of `F(r₀)` and of the
//! symbol `s` when `γ > 1`.
//!
//! Every inequality depends on the cotangent variables only through the
//! Laplace–Beltrami symbol `r₀ ≥ 0`, so `r₀` is a scalar grid axis. The
//! semiclassical boxes are
//!
//! ```text
//! Z₁ = { Re z = 1,  h^δ ≤ Im z ≤ 1 }
//! Z₂ = { Re z = −1, 0 ≤ Im z ≤ 1 }
//! Z₃ = { |Re z| ≤ 1, Im z = 1 }
//! ```
//!
//! A report's margin is the slack `lhs − rhs` of each checked strict
//! inequality; the report passes when the smallest slack is positive.
//! Scans run in a fixed order, so identical grids give identical reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::regions::sqrt_upper;
use crate::{Error, Result};

/// Evenly spaced samples, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl LinRange {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.max } else { self.min + k as f64 * step })
            .collect()
    }
}

/// Geometrically spaced samples, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeomRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GeomRange {
    pub fn values(&self) -> Vec<f64> {
        let ratio = (self.max / self.min).ln() / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.max } else { self.min * (ratio * k as f64).exp() })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r0: LinRange,
    pub h: GeomRange,
    /// Unit-interval parameter placing points along each box edge.
    pub t: LinRange,
    pub gamma: f64,
    pub delta: f64,
    pub eps0: f64,
}

impl Default for GridSpec {
    /// `r0 ∈ [0, 100]` × 200, `h ∈ [1e-4, 1e-1]` × 20 geometric,
    /// `t ∈ [0, 1]` × 16, δ = 0.45, ε₀ = 0.1, γ = 0.5.
    ///
    /// With 16 edge points no `Z₃` sample has `Re z` equal to an `r0` sample,
    /// where `|ρ| ≥ √|Im z|` holds with equality.
    fn default() -> Self {
        Self {
            r0: LinRange { min: 0.0, max: 100.0, count: 200 },
            h: GeomRange { min: 1e-4, max: 1e-1, count: 20 },
            t: LinRange { min: 0.0, max: 1.0, count: 16 },
            gamma: 0.5,
            delta: 0.45,
            eps0: 0.1,
        }
    }
}

impl GridSpec {
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        for (name, count, min, max) in [
            ("r0", self.r0.count, self.r0.min, self.r0.max),
            ("h", self.h.count, self.h.min, self.h.max),
            ("t", self.t.count, self.t.min, self.t.max),
        ] {
            if count < 2 {
                return bad(format!("grid axis {name} needs at least 2 points"));
            }
            if !(min < max) {
                return bad(format!("grid axis {name} needs min < max"));
            }
        }
        if !(self.r0.min >= 0.0) {
            return bad("r0 must be nonnegative".into());
        }
        if !(self.h.min > 0.0) {
            return bad("h must be positive".into());
        }
        if !(self.t.min >= 0.0 && self.t.max <= 1.0) {
            return bad("t must lie in [0, 1]".into());
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return bad("delta must lie in (0, 1/2)".into());
        }
        if !(self.eps0 > 0.0) {
            return bad("eps0 must be positive".into());
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return bad("gamma must be positive".into());
        }
        Ok(())
    }

    /// `(h, Im z)` pairs covering `Z₁`.
    fn z1_heights(&self) -> Vec<(f64, f64)> {
        let ts = self.t.values();
        let mut out = Vec::new();
        for h in self.h.values() {
            let floor = h.powf(self.delta);
            for &t in &ts {
                out.push((h, floor + t * (1.0 - floor)));
            }
        }
        out
    }
}

/// Parses `r0=MIN:MAX:COUNT,h=MIN:MAX:COUNT,t=MIN:MAX:COUNT,delta=D,eps0=E,gamma=G`.
/// Omitted keys keep their defaults.
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut g = GridSpec::default();
        let bad = |why: String| Error::InvalidInput(format!("bad grid {s:?}: {why}"));
        let range = |v: &str| -> Result<(f64, f64, usize)> {
            let parts: Vec<&str> = v.split(':').collect();
            match parts.as_slice() {
                [a, b, n] => Ok((
                    a.parse().map_err(|_| bad(format!("bad number {a:?}")))?,
                    b.parse().map_err(|_| bad(format!("bad number {b:?}")))?,
                    n.parse().map_err(|_| bad(format!("bad count {n:?}")))?,
                )),
                _ => Err(bad(format!("expected MIN:MAX:COUNT, got {v:?}"))),
            }
        };
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad(format!("bad number {v:?}")));
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {item:?}")))?;
            match key.trim() {
                "r0" => {
                    let (min, max, count) = range(value)?;
                    g.r0 = LinRange { min, max, count };
                }
                "h" => {
                    let (min, max, count) = range(value)?;
                    g.h = GeomRange { min, max, count };
                }
                "t" => {
                    let (min, max, count) = range(value)?;
                    g.t = LinRange { min, max, count };
                }
                "delta" => g.delta = num(value)?,
                "eps0" => g.eps0 = num(value)?,
                "gamma" => g.gamma = num(value)?,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        g.validate()?;
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub worst_margin: f64,
    /// Which inequality produced the worst margin.
    pub worst_inequality: String,
    pub worst_point: BTreeMap<String, f64>,
    pub fitted_constants: BTreeMap<String, f64>,
    pub points_checked: usize,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check {}: {}", self.name, if self.pass { "PASS" } else { "FAIL" })?;
        writeln!(f, "  points checked: {}", self.points_checked)?;
        writeln!(f, "  worst margin: {:e} ({})", self.worst_margin, self.worst_inequality)?;
        for (k, v) in &self.worst_point {
            writeln!(f, "    {k} = {v}")?;
        }
        for (k, v) in &self.fitted_constants {
            writeln!(f, "  fitted {k} = {v:e}")?;
        }
        Ok(())
    }
}

struct Tracker {
    name: &'static str,
    worst: f64,
    label: String,
    point: Vec<(&'static str, f64)>,
    count: usize,
    fitted: BTreeMap<String, f64>,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            worst: f64::INFINITY,
            label: String::new(),
            point: Vec::new(),
            count: 0,
            fitted: BTreeMap::new(),
        }
    }

    fn observe(&mut self, label: &str, margin: f64, point: &[(&'static str, f64)]) {
        self.count += 1;
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if margin < self.worst {
            self.worst = margin;
            self.label = label.to_string();
            self.point = point.to_vec();
        }
    }

    /// Fails the report outright when `ok` is false.
    fn require(&mut self, label: &str, ok: bool) {
        if !ok {
            self.worst = f64::NEG_INFINITY;
            self.label = label.to_string();
            self.point.clear();
        }
    }

    fn fit(&mut self, name: &str, value: f64) {
        self.fitted.insert(name.to_string(), value);
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            name: self.name.to_string(),
            pass: self.worst > 0.0,
            worst_margin: self.worst,
            worst_inequality: self.label,
            worst_point: self.point.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            fitted_constants: self.fitted,
            points_checked: self.count,
        }
    }
}

/// The root of `ρ² + r₀ − z = 0` with `Im ρ > 0`.
pub fn rho(r0: f64, z: Complex64) -> Result<Complex64> {
    let d = z - r0;
    if d.im == 0.0 {
        if d.re >= 0.0 {
            return Err(Error::GlancingValue { value: d.re });
        }
        return Ok(Complex64::new(0.0, (-d.re).sqrt()));
    }
    let s = d.sqrt();
    Ok(if s.im > 0.0 { s } else { -s })
}

pub fn check_rho_bounds(g: &GridSpec) -> Result<CheckReport> {
    g.validate()?;
    let mut tr = Tracker::new("rho");
    let r0s = g.r0.values();
    let ts = g.t.values();

    let mut upper: Vec<(Complex64, f64)> = g
        .z1_heights()
        .into_iter()
        .map(|(h, im)| (Complex64::new(1.0, im), h))
        .collect();
    upper.extend(ts.iter().map(|&t| (Complex64::new(2.0 * t - 1.0, 1.0), f64::NAN)));

    for &(z, h) in &upper {
        for &r0 in &r0s {
            let p = rho(r0, z)?;
            let at = [("r0", r0), ("re_z", z.re), ("im_z", z.im), ("h", h)];
            let im_z = z.im.abs();
            tr.observe("Im rho >= |Im z| / (2|rho|)", p.im - im_z / (2.0 * p.norm()), &at);
            tr.observe("|rho| >= sqrt|Im z|", p.norm() - im_z.sqrt(), &at);
            if r0 >= 2.0 {
                tr.observe("2 Im rho >= |rho| (r0 >= 2)", 2.0 * p.im - p.norm(), &at);
            }
        }
    }

    let mut c1 = 0.0f64;
    let mut c2 = f64::INFINITY;
    for &t in &ts {
        let z = Complex64::new(-1.0, t);
        for &r0 in &r0s {
            let p = rho(r0, z)?;
            let at = [("r0", r0), ("re_z", z.re), ("im_z", z.im)];
            tr.observe("2 Im rho >= |rho| on Z2", 2.0 * p.im - p.norm(), &at);
            let root = (r0 + 1.0).sqrt();
            c1 = c1.max(2.0 * p.im / root);
            c2 = c2.min(p.norm() / root);
        }
    }
    tr.fit("C1", c1);
    tr.fit("C2", c2);
    tr.require("C1 finite and C2 positive", c1.is_finite() && c2 > 0.0);
    Ok(tr.finish())
}

/// Checks for `ε₀ ≤ γ ≤ 1 − ε₀`.
pub fn check_case_a(g: &GridSpec) -> Result<CheckReport> {
    g.validate()?;
    let gamma = g.gamma;
    let eps0 = g.eps0;
    if !(gamma >= eps0 && gamma <= 1.0 - eps0) {
        return Err(Error::InvalidInput(format!(
            "case A needs eps0 <= gamma <= 1 - eps0, got gamma = {gamma}, eps0 = {eps0}"
        )));
    }
    let k = 1.0 - gamma * gamma;
    let band = 0.5 * eps0 * eps0;
    let mut tr = Tracker::new("case-A");

    // The band |1 − r0| ≤ ε₀²/2 is thin; sample it explicitly.
    let mut r0s = g.r0.values();
    r0s.extend((0..=10).map(|j| 1.0 - band + 2.0 * band * j as f64 / 10.0));

    let mut c3 = f64::INFINITY;
    let mut c_im = f64::INFINITY;
    for (h, im) in g.z1_heights() {
        let z = Complex64::new(1.0, im);
        let hd = h.powf(g.delta);
        let root_z = sqrt_upper(z);
        for &r0 in &r0s {
            let at = [("r0", r0), ("h", h), ("im_z", im)];
            let a = k * z - r0;
            if (1.0 - r0).abs() <= band {
                tr.observe("Z1 on F: Re((1-g^2)z - r0) <= -eps0^2/2", -band - a.re, &at);
            } else {
                tr.observe("Z1 off F: (1-g^2) Im z >= eps0 h^delta", k * im - eps0 * hd, &at);
            }
            let p = rho(r0, z)?;
            let sum_im = p.im + gamma * root_z.im;
            let c = p - gamma * root_z;
            tr.observe("Z1: Im(rho + g sqrt z) > 0", sum_im / hd, &at);
            tr.observe("Z1: |c| > 0", c.norm() / hd, &at);
            c3 = c3.min(c.norm() / hd);
            c_im = c_im.min(sum_im / hd);
        }
    }

    let mut eps1 = f64::INFINITY;
    for t in g.t.values() {
        for &r0 in &r0s {
            let z2 = Complex64::new(-1.0, t);
            let m = -(k * z2 - r0).re;
            tr.observe("Z2: Re((1-g^2)z - r0) < 0", m, &[("r0", r0), ("re_z", -1.0), ("im_z", t)]);
            eps1 = eps1.min(m);

            let z3 = Complex64::new(2.0 * t - 1.0, 1.0);
            let m = (k * z3 - r0).im.abs();
            tr.observe("Z3: |Im((1-g^2)z - r0)| > 0", m, &[("r0", r0), ("re_z", z3.re), ("im_z", 1.0)]);
            eps1 = eps1.min(m);
        }
    }
    tr.fit("C3", c3);
    tr.fit("C_im", c_im);
    tr.fit("eps1", eps1);
    Ok(tr.finish())
}

/// `F(r₀) = γ²((1+r₀)² + τ²)(1+y) − y²(1 + √((1+r₀)² + τ²) + r₀)` with
/// `τ = t·Im z` and `y = √(1 + τ²)`.
pub fn case_b_f(gamma: f64, r0: f64, tau: f64) -> f64 {
    let y = (1.0 + tau * tau).sqrt();
    let q2 = (1.0 + r0).powi(2) + tau * tau;
    gamma * gamma * q2 * (1.0 + y) - y * y * (1.0 + q2.sqrt() + r0)
}

/// `s = ½ Im[(−1 + iτ − r₀)^{−1/2} − γ(−1 + iτ)^{−1/2}]` on the branch with
/// `Im √· > 0`.
pub fn case_b_symbol(gamma: f64, r0: f64, tau: f64) -> f64 {
    let zt = Complex64::new(-1.0, tau);
    0.5 * (sqrt_upper(zt - r0).inv() - gamma * sqrt_upper(zt).inv()).im
}

/// The same symbol from the half-angle form
/// `(γ√q cos(φ/2) − √y cos(ψ/2)) / (2√(yq))`, `cos φ = 1/y`, `cos ψ = (1+r₀)/q`.
pub fn case_b_symbol_polar(gamma: f64, r0: f64, tau: f64) -> f64 {
    let y = (1.0 + tau * tau).sqrt();
    let q = ((1.0 + r0).powi(2) + tau * tau).sqrt();
    let half_phi = (0.5 * (1.0 + 1.0 / y)).sqrt();
    let half_psi = (0.5 * (1.0 + (1.0 + r0) / q)).sqrt();
    (gamma * q.sqrt() * half_phi - y.sqrt() * half_psi) / (2.0 * (y * q).sqrt())
}

const SLOPE_SLACK: f64 = 1e-6;

/// Checks for `γ² − 1 ≥ η₀` with `η₀` taken from the grid's `eps0`.
pub fn check_case_b(g: &GridSpec) -> Result<CheckReport> {
    g.validate()?;
    let gamma = g.gamma;
    if !(gamma * gamma - 1.0 >= g.eps0) {
        return Err(Error::InvalidInput(format!(
            "case B needs gamma^2 - 1 >= eps0, got gamma = {gamma}, eps0 = {}",
            g.eps0
        )));
    }
    let mut tr = Tracker::new("case-B");
    let ts = g.t.values();
    let mut eta1 = f64::INFINITY;
    let mut eta2 = f64::INFINITY;
    let mut route_gap = 0.0f64;
    for &t in &ts {
        for &im in &ts {
            let tau = t * im;
            let y = (1.0 + tau * tau).sqrt();
            let f0 = case_b_f(gamma, 0.0, tau);
            eta1 = eta1.min(f0);
            let closed = (gamma * gamma - 1.0) * (1.0 + y) * y * y;
            route_gap = route_gap.max((f0 - closed).abs() / closed.abs().max(1.0));
            let bound = 2.0 * (1.0 + y - y * y);
            for r0 in g.r0.values() {
                let at = [("r0", r0), ("t", t), ("im_z", im)];
                tr.observe("F(r0) > 0", case_b_f(gamma, r0, tau), &at);
                let step = 1e-5 * (1.0 + r0);
                let slope = (case_b_f(gamma, r0 + step, tau) - case_b_f(gamma, r0 - step, tau)) / (2.0 * step);
                tr.observe("dF/dr0 >= 2(1 + y - y^2)", slope - (bound - SLOPE_SLACK), &at);
                let s = case_b_symbol(gamma, r0, tau);
                tr.observe("s > 0", s, &at);
                eta2 = eta2.min(s);
                let alt = case_b_symbol_polar(gamma, r0, tau);
                route_gap = route_gap.max((s - alt).abs() / (1.0 + s.abs()));
            }
        }
    }
    tr.fit("eta1", eta1);
    tr.fit("eta2", eta2);
    tr.fit("route_gap", route_gap);
    tr.require("F(0) closed form and polar symbol agree", route_gap <= 1e-12);
    Ok(tr.finish())
}

/// `Re √z ≥ 1` on `Re z = 1`. Sampled on the `Z₁` heights, where it holds
/// strictly.
pub fn check_sqrtz_lower(g: &GridSpec) -> Result<CheckReport> {
    g.validate()?;
    let mut tr = Tracker::new("sqrtz");
    let mut worst_h = f64::INFINITY;
    for (h, im) in g.z1_heights() {
        let z = Complex64::new(1.0, im);
        let m = sqrt_upper(z).re - 1.0;
        tr.observe("Re sqrt z >= 1", m, &[("h", h), ("im_z", im)]);
        worst_h = worst_h.min(m);
    }
    tr.fit("min_re_sqrt_z_minus_1", worst_h);
    Ok(tr.finish())
}
