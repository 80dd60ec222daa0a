//! Point spectrum assembly: per-mode roots of `F_n` in `Re w > 0`, mapped to
//! `λ = −1/(2w)` and certified against the Hankel-path `C(n; μ, γ)`.
//!
//! Reported multiplicity is `(2n + 1) · (root order in F_n)`: the spherical
//! harmonic degeneracy times the polynomial root order.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::mode_family::{self, ModeFamily, N_CAP};
use crate::polynomial::ComplexPoly;
use crate::rootfind::{self, Contour, WindingResult};
use crate::{Error, Result};

/// Roots with `Re w` at or below this are not eigenvalues.
pub const HALF_PLANE_THRESHOLD: f64 = 1e-9;
/// Left edge of the argument-principle rectangle in the w-plane.
pub const COUNT_RECT_LEFT: f64 = 1e-3;
/// Residual certification bound, relative to `1 + |λ|`.
pub const RESIDUAL_BOUND: f64 = 1e-7;

const CONJUGATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub lambda: Complex64,
    pub mode_n: usize,
    pub w_root: Complex64,
    pub root_order: usize,
    pub multiplicity: usize,
    /// `|C(n; μ, γ)|` at `μ = −iλ`, from the Hankel recurrence.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub gamma: f64,
    pub n_max: usize,
    pub eigenvalues: Vec<Eigenvalue>,
    pub per_mode_counts: Vec<usize>,
    pub warnings: Vec<String>,
}

impl SpectrumReport {
    /// Sum of multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    pub fn lambdas(&self) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|e| e.lambda).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeSpectrum {
    pub eigenvalues: Vec<Eigenvalue>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { tol: rootfind::DEFAULT_TOL }
    }
}

fn check_inputs(n: usize, gamma: f64) -> Result<()> {
    if n > N_CAP {
        return Err(Error::DegreeExceedsBudget { n, cap: N_CAP });
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    Ok(())
}

pub fn mode_spectrum(n: usize, gamma: f64) -> Result<ModeSpectrum> {
    mode_spectrum_with(n, gamma, &SpectrumOptions::default())
}

pub fn mode_spectrum_with(n: usize, gamma: f64, opts: &SpectrumOptions) -> Result<ModeSpectrum> {
    check_inputs(n, gamma)?;
    let mut out = ModeSpectrum::default();
    for root in mode_family::char_roots(n, gamma, opts.tol)? {
        let w = root.value;
        if w.re <= 0.0 {
            continue;
        }
        if w.re <= HALF_PLANE_THRESHOLD {
            out.warnings.push(format!(
                "boundary-ambiguous root: n = {n}, w = {w} excluded (0 < Re w <= {HALF_PLANE_THRESHOLD:e})"
            ));
            continue;
        }
        let lambda = mode_family::lambda_from_w(w)?;
        let residual = mode_family::eval_c(n, mode_family::mu_from_lambda(lambda), gamma)?.norm();
        if residual > RESIDUAL_BOUND * (1.0 + lambda.norm()) {
            out.warnings.push(format!(
                "residual certification failed: n = {n}, lambda = {lambda}, |C| = {residual:e}"
            ));
        }
        out.eigenvalues.push(Eigenvalue {
            lambda,
            mode_n: n,
            w_root: w,
            root_order: root.order,
            multiplicity: (2 * n + 1) * root.order,
            residual,
        });
    }
    Ok(out)
}

pub fn full_spectrum(gamma: f64, n_max: usize) -> Result<SpectrumReport> {
    full_spectrum_with(gamma, n_max, &SpectrumOptions::default())
}

/// Union of [`mode_spectrum`] over `n = 0..=n_max`. Modes are computed in
/// parallel and merged in ascending `n`.
pub fn full_spectrum_with(gamma: f64, n_max: usize, opts: &SpectrumOptions) -> Result<SpectrumReport> {
    check_inputs(n_max, gamma)?;
    let modes: Vec<ModeSpectrum> = (0..=n_max)
        .into_par_iter()
        .map(|n| mode_spectrum_with(n, gamma, opts))
        .collect::<Result<_>>()?;

    let mut eigenvalues = Vec::new();
    let mut per_mode_counts = Vec::with_capacity(modes.len());
    let mut warnings = Vec::new();
    for m in modes {
        per_mode_counts.push(m.eigenvalues.len());
        eigenvalues.extend(m.eigenvalues);
        warnings.extend(m.warnings);
    }
    sort_eigenvalues(&mut eigenvalues);

    for e in &eigenvalues {
        if e.lambda.im == 0.0 {
            continue;
        }
        let tol = CONJUGATE_TOL * (1.0 + e.lambda.norm());
        let paired = eigenvalues.iter().any(|o| {
            o.mode_n == e.mode_n
                && o.multiplicity == e.multiplicity
                && (o.lambda - e.lambda.conj()).norm() <= tol
        });
        if !paired {
            warnings.push(format!(
                "conjugate closure violated: n = {}, lambda = {} has no conjugate partner",
                e.mode_n, e.lambda
            ));
        }
    }

    Ok(SpectrumReport { gamma, n_max, eigenvalues, per_mode_counts, warnings })
}

/// Descending real part, ties broken by ascending imaginary part.
pub fn sort_eigenvalues(eigs: &mut [Eigenvalue]) {
    eigs.sort_by(|a, b| {
        b.lambda
            .re
            .total_cmp(&a.lambda.re)
            .then(a.lambda.im.total_cmp(&b.lambda.im))
            .then(a.mode_n.cmp(&b.mode_n))
    });
}

/// Rectangle `[1e-3, W] × [−W, W]` in the w-plane with `W` the Cauchy bound
/// of `p`.
pub fn counting_rectangle(p: &ComplexPoly) -> Result<Contour> {
    let w = p.cauchy_bound()?;
    Contour::rectangle(Complex64::new(COUNT_RECT_LEFT, -w), Complex64::new(w, w))
}

/// Argument-principle count of the zeros of `F_n` in the counting rectangle.
/// Agrees with the summed root orders of [`mode_spectrum`] when no root has
/// `Re w` between the filter threshold and the rectangle edge.
pub fn validate_mode_count(n: usize, gamma: f64) -> Result<WindingResult> {
    check_inputs(n, gamma)?;
    let fam = ModeFamily::new(n, gamma)?;
    let f = fam.char_poly();
    rootfind::polynomial_winding(f, &counting_rectangle(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Bisection on `F_2(w) = 36w³ + 6w² − 2w − 1/2` (γ = 2) over (0.2, 0.3).
    fn bisect_f2() -> f64 {
        let f = |w: f64| ((36.0 * w + 6.0) * w - 2.0) * w - 0.5;
        let (mut lo, mut hi) = (0.2, 0.3);
        assert!(f(lo) < 0.0 && f(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn f2_written_out() {
        let f = mode_family::char_poly(2, 2.0).unwrap();
        let got: Vec<f64> = f.coeffs().iter().map(|c| c.re).collect();
        assert_eq!(got, vec![-0.5, -2.0, 6.0, 36.0]);
    }

    #[test]
    fn mode_examples() {
        let m = mode_spectrum(0, 2.0).unwrap();
        assert_eq!(m.eigenvalues.len(), 1);
        assert_eq!(m.eigenvalues[0].lambda, c(-1.0, 0.0));
        assert_eq!(m.eigenvalues[0].multiplicity, 1);

        let m = mode_spectrum(1, 2.0).unwrap();
        assert_eq!(m.eigenvalues.len(), 1);
        let e = m.eigenvalues[0];
        assert!((e.lambda - c(-2f64.sqrt(), 0.0)).norm() <= 1e-12 * 2f64.sqrt());
        assert_eq!(e.multiplicity, 3);
        assert!(e.residual <= 1e-10);

        assert!(mode_spectrum(1, 1.0).unwrap().eigenvalues.is_empty());
    }

    #[test]
    fn full_spectrum_gamma_two_low_modes() {
        let report = full_spectrum(2.0, 2).unwrap();
        assert_eq!(report.eigenvalues.len(), 3);
        assert_eq!(report.per_mode_counts, vec![1, 1, 1]);
        let l: Vec<_> = report.lambdas();
        assert_eq!(l[0], c(-1.0, 0.0));
        assert!((l[1].re + 2f64.sqrt()).abs() <= 1e-12 * 2f64.sqrt());
        let w2 = bisect_f2();
        let lambda2 = -0.5 / w2;
        assert!((l[2].re - lambda2).abs() <= 1e-10 * lambda2.abs());
        assert!((lambda2 + 1.94).abs() < 0.01);
        let mult: Vec<_> = report.eigenvalues.iter().map(|e| e.multiplicity).collect();
        assert_eq!(mult, vec![1, 3, 5]);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn mode_count_examples() {
        assert_eq!(validate_mode_count(1, 2.0).unwrap().count, 1);
        assert_eq!(validate_mode_count(1, 1.0).unwrap().count, 0);
        assert_eq!(validate_mode_count(0, 0.5).unwrap().count, 0);
    }

    #[test]
    fn sorted_descending_real_part() {
        let report = full_spectrum(1.5, 12).unwrap();
        for pair in report.eigenvalues.windows(2) {
            assert!(pair[0].lambda.re >= pair[1].lambda.re);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(mode_spectrum(65, 2.0), Err(Error::DegreeExceedsBudget { .. })));
        assert!(matches!(full_spectrum(-1.0, 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn gamma_above_one_has_real_ray_eigenvalue_per_mode() {
        for gamma in [1.05, 1.5, 3.0] {
            for n in 0..=40 {
                let m = mode_spectrum(n, gamma).unwrap();
                assert!(!m.eigenvalues.is_empty(), "gamma={gamma} n={n}");
                for e in m.eigenvalues {
                    assert!(e.lambda.im.abs() <= 1e-8 * (1.0 + e.lambda.re.abs()));
                    assert!(e.lambda.re <= -1.0 / (gamma - 1.0) + 1e-8);
                }
            }
        }
    }

    #[test]
    fn n_zero_eigenvalue_is_exact() {
        for gamma in [1.1, 1.5, 2.0, 5.0] {
            let m = mode_spectrum(0, gamma).unwrap();
            let expected = -1.0 / (gamma - 1.0);
            assert!((m.eigenvalues[0].lambda.re - expected).abs() <= 1e-12 * expected.abs());
        }
    }

    #[test]
    fn max_real_part_moves_left_as_gamma_decreases() {
        let gammas = [1.5, 1.25, 1.1, 1.05];
        for n in 0..=5 {
            let tops: Vec<f64> = gammas
                .iter()
                .map(|&g| {
                    mode_spectrum(n, g)
                        .unwrap()
                        .eigenvalues
                        .iter()
                        .map(|e| e.lambda.re)
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .collect();
            for pair in tops.windows(2) {
                assert!(pair[1] < pair[0], "n={n}: {tops:?}");
            }
        }
    }
}
