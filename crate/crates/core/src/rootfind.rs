//! Simultaneous polynomial root finding and argument-principle zero counting.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::polynomial::ComplexPoly;
use crate::{Error, Result};

/// Default relative backward-error tolerance for [`roots`].
pub const DEFAULT_TOL: f64 = 1e-13;

const MAX_ITERATIONS: usize = 200;
const MERGE_TOL: f64 = 1e-8;
const INITIAL_PHASE: f64 = 0.4;
const POLISH_STEPS: usize = 2;

/// A root and the number of computed roots merged into it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub order: usize,
}

/// All roots of `p`, counted with order, by Aberth–Ehrlich iteration.
///
/// Exact zero roots are split off first. The remaining polynomial is scaled to
/// unit maximum coefficient, iterated from equally spaced points on the circle
/// of radius `(|a_0|/|a_deg|)^{1/deg}`, and the result is polished with Newton
/// steps on the unscaled polynomial. Roots closer than `1e-8 (1 + |root|)` are
/// merged. For real polynomials, unpaired roots within rounding of the real
/// axis are made exactly real.
pub fn roots(p: &ComplexPoly, tol: f64) -> Result<Vec<Root>> {
    let degree = p.degree().ok_or(Error::EmptyPolynomial)?;
    if degree == 0 {
        return Err(Error::InvalidInput("root finding needs degree >= 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }

    let zero_order = p.zero_root_order();
    let reduced = p.shift_down(zero_order).expect("low coefficients are zero");
    let (normalized, _) = reduced.normalize()?;

    let mut found = match normalized.degree() {
        Some(0) => Vec::new(),
        Some(1) => {
            let c = normalized.coeffs();
            vec![-c[0] / c[1]]
        }
        _ => aberth(&normalized, tol)?,
    };

    for z in found.iter_mut() {
        *z = polish(&reduced, *z);
    }
    if p.is_real() {
        snap_real(&mut found);
    }

    let degree_reduced = normalized.degree().unwrap_or(0) as i32;
    let worst = found
        .iter()
        .map(|&z| normalized.eval(z).norm() / (1.0 + z.norm()).powi(degree_reduced))
        .fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::RootDiverged { residual: worst });
    }

    let mut merged = merge_clusters(&found);
    merge_multiple_roots(&normalized, &mut merged, tol);
    if p.is_real() {
        snap_merged_real(&mut merged, tol);
    }
    if zero_order > 0 {
        merged.push(Root { value: Complex64::new(0.0, 0.0), order: zero_order });
    }
    sort_roots(&mut merged);
    debug_assert_eq!(merged.iter().map(|r| r.order).sum::<usize>(), degree);
    Ok(merged)
}

fn aberth(p: &ComplexPoly, tol: f64) -> Result<Vec<Complex64>> {
    let coeffs = p.coeffs();
    let degree = coeffs.len() - 1;
    let radius = (coeffs[0].norm() / coeffs[degree].norm()).powf(1.0 / degree as f64);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / degree as f64 + INITIAL_PHASE))
        .collect();
    let mut done = vec![false; degree];

    for _ in 0..MAX_ITERATIONS {
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let (value, scale) = p.eval_with_scale(z[i]);
            if value.norm() <= tol * scale {
                done[i] = true;
                continue;
            }
            let (_, deriv) = p.eval_with_derivative(z[i]);
            let ratio = value / deriv;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }

    let residual = z
        .iter()
        .map(|&w| {
            let (v, s) = p.eval_with_scale(w);
            v.norm() / s.max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    Err(Error::RootDiverged { residual })
}

/// Newton steps on the unscaled polynomial, each kept only if it lowers the
/// residual.
fn polish(p: &ComplexPoly, mut z: Complex64) -> Complex64 {
    let mut residual = p.eval(z).norm();
    for _ in 0..POLISH_STEPS {
        let (v, d) = p.eval_with_derivative(z);
        if d.norm() == 0.0 {
            break;
        }
        let candidate = z - v / d;
        let r = p.eval(candidate).norm();
        if candidate.is_finite() && r < residual {
            z = candidate;
            residual = r;
        } else {
            break;
        }
    }
    z
}

/// Ascending real part, then imaginary part.
pub(crate) fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
}

fn snap_real(found: &mut [Complex64]) {
    let snapshot = found.to_vec();
    for (i, z) in found.iter_mut().enumerate() {
        let near_axis = z.im.abs() <= MERGE_TOL * (1.0 + z.norm());
        let has_partner = snapshot.iter().enumerate().any(|(j, w)| {
            j != i && (w - z.conj()).norm() <= MERGE_TOL * (1.0 + z.norm()) && w.im * z.im < 0.0
        });
        if near_axis && !has_partner {
            z.im = 0.0;
        }
    }
}

pub(crate) fn merge_clusters(found: &[Complex64]) -> Vec<Root> {
    let mut used = vec![false; found.len()];
    let mut out = Vec::new();
    for i in 0..found.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![found[i]];
        // Transitive closure over the merge distance.
        let mut k = 0;
        while k < members.len() {
            let anchor = members[k];
            for j in 0..found.len() {
                if !used[j] && (found[j] - anchor).norm() <= MERGE_TOL * (1.0 + anchor.norm()) {
                    used[j] = true;
                    members.push(found[j]);
                }
            }
            k += 1;
        }
        let value = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push(Root { value, order: members.len() });
    }
    out
}

/// A root of order `k` comes back from the iteration as a cluster of radius
/// about `tol^(1/k)`, wider than the fixed merge distance. A root and its
/// nearest neighbours are joined when they fit in that radius and their
/// weighted mean is itself a root to backward error `tol` with a derivative
/// small to `tol^((k-1)/k)`. Orders above 3 are left as clusters.
fn merge_multiple_roots(p: &ComplexPoly, merged: &mut Vec<Root>, tol: f64) {
    const MAX_GROUP: usize = 3;
    let dp = p.derivative();
    loop {
        let mut best: Option<(Vec<usize>, Root)> = None;
        for i in 0..merged.len() {
            let anchor = merged[i].value;
            let mut near: Vec<usize> = (0..merged.len()).filter(|&j| j != i).collect();
            near.sort_by(|&x, &y| {
                (merged[x].value - anchor).norm().total_cmp(&(merged[y].value - anchor).norm())
            });
            let mut group = vec![i];
            for &j in near.iter().take(MAX_GROUP - 1) {
                group.push(j);
                let order: usize = group.iter().map(|&g| merged[g].order).sum();
                let reach = 2.0 * tol.powf(1.0 / order as f64) * (1.0 + anchor.norm());
                if (merged[j].value - anchor).norm() > reach {
                    continue;
                }
                let mean = group
                    .iter()
                    .map(|&g| merged[g].value * merged[g].order as f64)
                    .sum::<Complex64>()
                    / order as f64;
                let (value, scale) = p.eval_with_scale(mean);
                let (slope, slope_scale) = dp.eval_with_scale(mean);
                let flat = slope.norm() <= tol.powf((order - 1) as f64 / order as f64) * slope_scale;
                if order <= MAX_GROUP && value.norm() <= tol * scale && flat && best.as_ref().map_or(true, |(_, r)| order > r.order) {
                    best = Some((group.clone(), Root { value: mean, order }));
                }
            }
        }
        match best {
            Some((mut group, root)) => {
                group.sort_unstable();
                let keep = group[0];
                for &g in group[1..].iter().rev() {
                    merged.remove(g);
                }
                merged[keep] = root;
            }
            None => break,
        }
    }
}

/// A real polynomial's multiple real root has no conjugate partner; its
/// cluster mean keeps an imaginary part of the cluster's size.
fn snap_merged_real(merged: &mut [Root], tol: f64) {
    let snapshot = merged.to_vec();
    for (i, r) in merged.iter_mut().enumerate() {
        let reach = 2.0 * tol.powf(1.0 / r.order as f64);
        if r.order < 2 || r.value.im == 0.0 || r.value.im.abs() > reach * (1.0 + r.value.norm()) {
            continue;
        }
        let has_partner = snapshot.iter().enumerate().any(|(j, w)| {
            j != i && w.value.im * r.value.im < 0.0 && (w.value - r.value.conj()).norm() <= reach * (1.0 + r.value.norm())
        });
        if !has_partner {
            r.value.im = 0.0;
        }
    }
}

/// A closed, positively oriented curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Contour {
    Circle { center: Complex64, radius: f64 },
    Rectangle { lower_left: Complex64, upper_right: Complex64 },
}

impl Contour {
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::InvalidInput(format!("circle radius must be positive, got {radius}")));
        }
        Ok(Contour::Circle { center, radius })
    }

    pub fn rectangle(lower_left: Complex64, upper_right: Complex64) -> Result<Self> {
        let d = upper_right - lower_left;
        if !(d.re > 0.0 && d.im > 0.0) || !d.is_finite() {
            return Err(Error::InvalidInput(
                "rectangle needs strictly positive width and height".into(),
            ));
        }
        Ok(Contour::Rectangle { lower_left, upper_right })
    }

    /// Point at parameter `t ∈ [0, 1]`, counterclockwise. Rectangles start at
    /// the lower-left corner and are parametrized by arc length.
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Contour::Circle { center, radius } => center + Complex64::from_polar(radius, TAU * t),
            Contour::Rectangle { lower_left, upper_right } => {
                let w = upper_right.re - lower_left.re;
                let h = upper_right.im - lower_left.im;
                let s = (t.rem_euclid(1.0)) * 2.0 * (w + h);
                let (x0, y0, x1, y1) = (lower_left.re, lower_left.im, upper_right.re, upper_right.im);
                if s <= w {
                    Complex64::new(x0 + s, y0)
                } else if s <= w + h {
                    Complex64::new(x1, y0 + (s - w))
                } else if s <= 2.0 * w + h {
                    Complex64::new(x1 - (s - w - h), y1)
                } else {
                    Complex64::new(x0, y1 - (s - 2.0 * w - h))
                }
            }
        }
    }

    /// Corner parameters a sampling grid must hit exactly (rectangles only).
    fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Contour::Circle { .. } => Vec::new(),
            Contour::Rectangle { lower_left, upper_right } => {
                let w = upper_right.re - lower_left.re;
                let h = upper_right.im - lower_left.im;
                let p = 2.0 * (w + h);
                vec![w / p, (w + h) / p, (2.0 * w + h) / p]
            }
        }
    }

    /// Strictly inside the curve.
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Contour::Circle { center, radius } => (z - center).norm() < radius,
            Contour::Rectangle { lower_left, upper_right } => {
                z.re > lower_left.re && z.re < upper_right.re && z.im > lower_left.im && z.im < upper_right.im
            }
        }
    }

    /// Euclidean distance from `z` to the curve.
    pub fn distance_to_boundary(&self, z: Complex64) -> f64 {
        match *self {
            Contour::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            Contour::Rectangle { lower_left, upper_right } => {
                let (x0, y0, x1, y1) = (lower_left.re, lower_left.im, upper_right.re, upper_right.im);
                let seg = |a: Complex64, b: Complex64| {
                    let d = b - a;
                    let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                    (a + d * t - z).norm()
                };
                let c = [
                    Complex64::new(x0, y0),
                    Complex64::new(x1, y0),
                    Complex64::new(x1, y1),
                    Complex64::new(x0, y1),
                ];
                (0..4).map(|k| seg(c[k], c[(k + 1) % 4])).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Largest real part over the curve.
    pub fn max_re(&self) -> f64 {
        match *self {
            Contour::Circle { center, radius } => center.re + radius,
            Contour::Rectangle { upper_right, .. } => upper_right.re,
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Contour::Circle { radius, .. } => TAU * radius,
            Contour::Rectangle { lower_left, upper_right } => {
                2.0 * ((upper_right.re - lower_left.re) + (upper_right.im - lower_left.im))
            }
        }
    }
}

impl fmt::Display for Contour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contour::Circle { center, radius } => {
                write!(f, "circle:{},{},{}", center.re, center.im, radius)
            }
            Contour::Rectangle { lower_left, upper_right } => write!(
                f,
                "rect:{},{},{},{}",
                lower_left.re, lower_left.im, upper_right.re, upper_right.im
            ),
        }
    }
}

/// Parses `circle:CX,CY,R` or `rect:X0,Y0,X1,Y1`.
impl FromStr for Contour {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad contour {s:?}; expected circle:CX,CY,R or rect:X0,Y0,X1,Y1"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<f64> = rest
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (kind, nums.as_slice()) {
            ("circle", [cx, cy, r]) => Contour::circle(Complex64::new(*cx, *cy), *r),
            ("rect", [x0, y0, x1, y1]) => {
                Contour::rectangle(Complex64::new(*x0, *y0), Complex64::new(*x1, *y1))
            }
            _ => Err(bad()),
        }
    }
}

/// One evaluation of an integrand along a contour.
///
/// `scale` is the magnitude of the terms that were summed to produce `value`;
/// a value below `1e-12 · scale` is treated as a zero on the contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: Complex64,
    pub scale: f64,
}

impl Sample {
    pub fn exact(value: Complex64) -> Self {
        Self { value, scale: value.norm() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub count: i64,
    pub min_modulus_on_contour: f64,
    pub segments_used: usize,
}

const INITIAL_SEGMENTS: usize = 64;
const ZERO_RELATIVE: f64 = 1e-12;
const MAX_EVALUATIONS: usize = 2_000_000;
const MIN_SEGMENT: f64 = 1e-13;

/// Winding number of `f` along `contour`: the number of zeros minus poles
/// enclosed.
///
/// Phase is accumulated over segments that are bisected until the phase
/// change across the segment and across each of its halves stays below π/2.
pub fn winding<F>(f: F, contour: &Contour) -> Result<WindingResult>
where
    F: Fn(Complex64) -> Result<Sample>,
{
    accumulate(&f, None::<&fn(Complex64) -> Complex64>, contour)
}

/// As [`winding`], additionally bisecting any segment over which the
/// logarithmic derivative `f'/f` predicts a phase swing of π/2 or more. This
/// guards against a segment that passes close to a dense cluster of zeros
/// whose phase changes alias to a small net difference.
pub fn winding_with_derivative<F, D>(f: F, df: D, contour: &Contour) -> Result<WindingResult>
where
    F: Fn(Complex64) -> Result<Sample>,
    D: Fn(Complex64) -> Complex64,
{
    accumulate(&f, Some(&df), contour)
}

/// Winding of a polynomial, using its exact derivative as the aliasing guard.
pub fn polynomial_winding(p: &ComplexPoly, contour: &Contour) -> Result<WindingResult> {
    let dp = p.derivative();
    winding_with_derivative(
        |z| {
            let (value, scale) = p.eval_with_scale(z);
            Ok(Sample { value, scale })
        },
        |z| dp.eval(z),
        contour,
    )
}

struct Node {
    t: f64,
    z: Complex64,
    s: Sample,
}

fn accumulate<F, D>(f: &F, df: Option<&D>, contour: &Contour) -> Result<WindingResult>
where
    F: Fn(Complex64) -> Result<Sample>,
    D: Fn(Complex64) -> Complex64,
{
    let mut evaluations = 0usize;
    let mut min_modulus = f64::INFINITY;
    let mut sample = |t: f64| -> Result<Node> {
        let z = contour.point(t);
        let s = f(z)?;
        evaluations += 1;
        if evaluations > MAX_EVALUATIONS {
            return Err(Error::WindingUnstable { raw: f64::NAN });
        }
        if !s.value.is_finite() {
            return Err(Error::ZeroOnContour { at: z });
        }
        if s.value.norm() <= ZERO_RELATIVE * s.scale || s.value.norm() == 0.0 {
            return Err(Error::ZeroOnContour { at: z });
        }
        min_modulus = min_modulus.min(s.value.norm());
        Ok(Node { t, z, s })
    };

    let mut params: Vec<f64> = (0..=INITIAL_SEGMENTS)
        .map(|k| k as f64 / INITIAL_SEGMENTS as f64)
        .chain(contour.breakpoints())
        .collect();
    params.sort_by(f64::total_cmp);
    params.dedup();

    let length = contour.length();
    let predicted = |node: &Node, dt: f64| -> f64 {
        match df {
            Some(df) => (df(node.z) / node.s.value).norm() * dt * length,
            None => 0.0,
        }
    };

    let mut total = 0.0;
    let mut segments = 0usize;
    let mut left = sample(params[0])?;
    for &t_end in &params[1..] {
        let right = sample(t_end)?;
        // Depth-first over the segment; the stack holds pending right ends.
        let mut stack = vec![right];
        while let Some(r) = stack.pop() {
            let dt = r.t - left.t;
            let dphase = (r.s.value / left.s.value).arg();
            let guard_ok = predicted(&left, dt) < FRAC_PI_2 && predicted(&r, dt) < FRAC_PI_2;
            if dphase.abs() < FRAC_PI_2 && guard_ok {
                let mid = sample(0.5 * (left.t + r.t))?;
                let d1 = (mid.s.value / left.s.value).arg();
                let d2 = (r.s.value / mid.s.value).arg();
                if d1.abs() < FRAC_PI_2 && d2.abs() < FRAC_PI_2 {
                    total += d1 + d2;
                    segments += 1;
                    left = r;
                    continue;
                }
                stack.push(r);
                stack.push(mid);
                continue;
            }
            if dt * length < MIN_SEGMENT * (1.0 + left.z.norm()) {
                return Err(Error::ZeroOnContour { at: left.z });
            }
            let mid = sample(0.5 * (left.t + r.t))?;
            stack.push(r);
            stack.push(mid);
        }
    }

    let raw = total / (2.0 * PI);
    let count = raw.round();
    if (raw - count).abs() > 0.25 {
        return Err(Error::WindingUnstable { raw });
    }
    Ok(WindingResult { count: count as i64, min_modulus_on_contour: min_modulus, segments_used: segments })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_values(rs: &[Root]) -> Vec<Complex64> {
        rs.iter().map(|r| r.value).collect()
    }

    #[test]
    fn roots_of_f1_at_gamma_one() {
        let rs = roots(&ComplexPoly::from_real(&[0.0, 1.0, 4.0]), DEFAULT_TOL).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[0].order, 1);
        assert!((rs[0].value - c(-0.25, 0.0)).norm() < 1e-15);
        assert_eq!(rs[1].value, c(0.0, 0.0));
    }

    #[test]
    fn roots_of_f1_at_gamma_two() {
        let rs = roots(&ComplexPoly::from_real(&[-0.5, 0.0, 4.0]), DEFAULT_TOL).unwrap();
        let v = sorted_values(&rs);
        let r = 1.0 / (2.0 * 2f64.sqrt());
        assert!((v[0] - c(-r, 0.0)).norm() < 1e-15);
        assert!((v[1] - c(r, 0.0)).norm() < 1e-15);
        assert!(v.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn linear_root() {
        let rs = roots(&ComplexPoly::from_real(&[1.0, 2.0]), DEFAULT_TOL).unwrap();
        assert_eq!(rs, vec![Root { value: c(-0.5, 0.0), order: 1 }]);
    }

    #[test]
    fn rejects_constants() {
        assert_eq!(roots(&ComplexPoly::zero(), DEFAULT_TOL), Err(Error::EmptyPolynomial));
        assert!(matches!(
            roots(&ComplexPoly::from_real(&[3.0]), DEFAULT_TOL),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn double_root_is_merged() {
        // (w − 1)² (w + 2)
        let p = &(&ComplexPoly::from_real(&[-1.0, 1.0]) * &ComplexPoly::from_real(&[-1.0, 1.0]))
            * &ComplexPoly::from_real(&[2.0, 1.0]);
        let rs = roots(&p, DEFAULT_TOL).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[1].order, 2);
        assert!((rs[1].value - c(1.0, 0.0)).norm() < 1e-7);
        assert_eq!(rs[1].value.im, 0.0);
    }

    #[test]
    fn close_simple_roots_stay_apart() {
        // (w − 1)(w − 1 − 1e-5): too far apart to be one root of order 2.
        let p = &ComplexPoly::from_real(&[-1.0, 1.0]) * &ComplexPoly::from_real(&[-1.0 - 1e-5, 1.0]);
        let rs = roots(&p, DEFAULT_TOL).unwrap();
        assert_eq!(rs.len(), 2, "{rs:?}");
    }

    #[test]
    fn triple_complex_root() {
        // (w − i)³
        let f = ComplexPoly::new(vec![c(0.0, -1.0), c(1.0, 0.0)]);
        let p = &(&f * &f) * &f;
        let rs = roots(&p, DEFAULT_TOL).unwrap();
        assert_eq!(rs.len(), 1, "{rs:?}");
        assert_eq!(rs[0].order, 3);
        assert!((rs[0].value - c(0.0, 1.0)).norm() < 1e-4);
    }

    #[test]
    fn complex_coefficients() {
        // (w − i)(w + 2 − i)
        let p = &ComplexPoly::new(vec![c(0.0, -1.0), c(1.0, 0.0)])
            * &ComplexPoly::new(vec![c(2.0, -1.0), c(1.0, 0.0)]);
        let rs = roots(&p, DEFAULT_TOL).unwrap();
        let v = sorted_values(&rs);
        assert!((v[0] - c(-2.0, 1.0)).norm() < 1e-13);
        assert!((v[1] - c(0.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn roots_of_unity_high_degree() {
        let mut coeffs = vec![0.0; 41];
        coeffs[0] = -1.0;
        coeffs[40] = 1.0;
        let rs = roots(&ComplexPoly::from_real(&coeffs), DEFAULT_TOL).unwrap();
        assert_eq!(rs.len(), 40);
        for r in rs {
            assert!((r.value.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn contour_parsing() {
        assert_eq!(
            "circle:-1.4142,0,0.2".parse::<Contour>().unwrap(),
            Contour::Circle { center: c(-1.4142, 0.0), radius: 0.2 }
        );
        assert_eq!(
            "rect:0.1,-1,1,1".parse::<Contour>().unwrap(),
            Contour::Rectangle { lower_left: c(0.1, -1.0), upper_right: c(1.0, 1.0) }
        );
        assert!("circle:0,0,-1".parse::<Contour>().is_err());
        assert!("rect:1,1,0,0".parse::<Contour>().is_err());
        assert!("square:1,2".parse::<Contour>().is_err());
        let k: Contour = "rect:0.1,-1,1,1".parse().unwrap();
        assert_eq!(k.to_string().parse::<Contour>().unwrap(), k);
    }

    #[test]
    fn rectangle_parametrization_is_closed_and_ccw() {
        let k = Contour::rectangle(c(0.0, 0.0), c(2.0, 1.0)).unwrap();
        assert_eq!(k.point(0.0), c(0.0, 0.0));
        assert_eq!(k.point(1.0 / 3.0), c(2.0, 0.0));
        assert!((k.point(0.5) - c(2.0, 1.0)).norm() < 1e-15);
        assert!((k.point(1.0) - k.point(0.0)).norm() < 1e-15);
        assert!(k.contains(c(1.0, 0.5)));
        assert!(!k.contains(c(2.0, 0.5)));
        assert!((k.distance_to_boundary(c(1.0, 0.5)) - 0.5).abs() < 1e-15);
    }

    fn f1_gamma2() -> ComplexPoly {
        ComplexPoly::from_real(&[-0.5, 0.0, 4.0])
    }

    #[test]
    fn winding_examples() {
        let rect = Contour::rectangle(c(0.1, -1.0), c(1.0, 1.0)).unwrap();
        assert_eq!(polynomial_winding(&f1_gamma2(), &rect).unwrap().count, 1);

        let far = Contour::circle(c(10.0, 0.0), 1.0).unwrap();
        assert_eq!(polynomial_winding(&f1_gamma2(), &far).unwrap().count, 0);

        let r2 = ComplexPoly::from_real(&[1.0, 6.0, 12.0]);
        let right = Contour::rectangle(c(0.01, -10.0), c(10.0, 10.0)).unwrap();
        assert_eq!(polynomial_winding(&r2, &right).unwrap().count, 0);
    }

    #[test]
    fn winding_without_derivative_counts_poles_negatively() {
        let k = Contour::circle(c(0.0, 0.0), 1.0).unwrap();
        let w = winding(|z| Ok(Sample::exact(z.powi(3) / (z - 0.5))), &k).unwrap();
        assert_eq!(w.count, 2);
        let w = winding(|z| Ok(Sample::exact((z - 0.3).inv())), &k).unwrap();
        assert_eq!(w.count, -1);
    }

    #[test]
    fn zero_on_contour_is_reported() {
        let k = Contour::circle(c(0.0, 0.0), 1.0).unwrap();
        let p = ComplexPoly::from_real(&[-1.0, 1.0]);
        assert!(matches!(polynomial_winding(&p, &k), Err(Error::ZeroOnContour { .. })));
    }

    #[test]
    fn dense_cluster_needs_derivative_guard() {
        // 30 zeros on a tiny circle next to a long rectangle edge.
        let mut coeffs = vec![0.0; 31];
        coeffs[0] = -(1e-2f64).powi(30);
        coeffs[30] = 1.0;
        let p = ComplexPoly::from_real(&coeffs);
        let k = Contour::rectangle(c(-5.0, -5.0), c(5.0, 5.0)).unwrap();
        assert_eq!(polynomial_winding(&p, &k).unwrap().count, 30);
        let half = Contour::rectangle(c(0.0001, -5.0), c(5.0, 5.0)).unwrap();
        // 30th roots of unity with Re > 0: k ∈ (−7.5, 7.5) → 15.
        assert_eq!(polynomial_winding(&p, &half).unwrap().count, 15);
    }
}
