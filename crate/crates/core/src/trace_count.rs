//! Contour counting of eigenvalues through the boundary operator.
//!
//! On mode `n` the operator `C(λ) = N(λ) − λγ` acts as the scalar
//! `C(n; −iλ, γ)`, which has no poles in `Re λ < 0`. The winding number of
//! that scalar along a contour counts mode-`n` eigenvalues inside; weighting
//! by `2n + 1` and summing over modes gives the trace of the Riesz projector.
//! Only the phase of `C` is used, never `∂C/∂λ`.
//!
//! Whether `(2n + 1) · (root order)` is the algebraic multiplicity is not
//! proven; agreement of the two counts is evidence only.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::mode_family::{self, N_CAP};
use crate::rootfind::{self, Contour};
use crate::spectrum;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub contour: Contour,
    pub gamma: f64,
    pub n_trunc: usize,
    pub per_mode_winding: Vec<i64>,
    /// `Σ (2n + 1) · winding_n`.
    pub weighted_total: i64,
    /// Summed multiplicities of enumerated eigenvalues strictly inside.
    pub direct_count: i64,
    pub agree: bool,
    pub warnings: Vec<String>,
}

fn check_contour(c: &Contour) -> Result<()> {
    if !(c.max_re() < 0.0) {
        return Err(Error::InvalidInput(format!(
            "contour {c} must lie in Re lambda < 0"
        )));
    }
    Ok(())
}

/// Winding of `λ ↦ C(n; −iλ, γ)` along `c`, evaluated through the Hankel
/// recurrence only.
pub fn mode_winding(n: usize, gamma: f64, c: &Contour) -> Result<i64> {
    check_contour(c)?;
    if n > N_CAP {
        return Err(Error::DegreeExceedsBudget { n, cap: N_CAP });
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    let w = rootfind::winding(
        |lambda| mode_family::eval_c_sample(n, mode_family::mu_from_lambda(lambda), gamma),
        c,
    )?;
    Ok(w.count)
}

pub fn count_in_contour(gamma: f64, c: &Contour, n_trunc: usize) -> Result<TraceReport> {
    check_contour(c)?;
    if n_trunc > N_CAP {
        return Err(Error::DegreeExceedsBudget { n: n_trunc, cap: N_CAP });
    }
    let per_mode_winding: Vec<i64> = (0..=n_trunc)
        .into_par_iter()
        .map(|n| mode_winding(n, gamma, c))
        .collect::<Result<_>>()?;
    let weighted_total = per_mode_winding
        .iter()
        .enumerate()
        .map(|(n, &k)| (2 * n as i64 + 1) * k)
        .sum();

    let report = spectrum::full_spectrum(gamma, n_trunc)?;
    let direct_count = report
        .eigenvalues
        .iter()
        .filter(|e| c.contains(e.lambda))
        .map(|e| e.multiplicity as i64)
        .sum();

    let mut warnings = report.warnings;
    if per_mode_winding.last().is_some_and(|&k| k != 0) {
        warnings.push(format!(
            "truncation suspect: top mode n = {n_trunc} has nonzero winding"
        ));
    }
    Ok(TraceReport {
        contour: *c,
        gamma,
        n_trunc,
        per_mode_winding,
        weighted_total,
        direct_count,
        agree: weighted_total == direct_count,
        warnings,
    })
}
