//! Dense polynomials with complex coefficients.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Polynomial stored by ascending degree: `coeffs[k]` multiplies `w^k`.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial is the empty sequence and `degree = len − 1` otherwise. Only
/// exact zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// The monomial `w`.
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    }

    /// Value together with `Σ |a_k| |w|^k`, the magnitude below which the
    /// value is indistinguishable from rounding noise.
    pub fn eval_with_scale(&self, w: Complex64) -> (Complex64, f64) {
        let r = w.norm();
        let mut value = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for &c in self.coeffs.iter().rev() {
            value = value * w + c;
            scale = scale * r + c.norm();
        }
        (value, scale)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, w: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut value = zero;
        let mut deriv = zero;
        for &c in self.coeffs.iter().rev() {
            deriv = deriv * w + value;
            value = value * w + c;
        }
        (value, deriv)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Divides by the largest coefficient magnitude and returns that
    /// magnitude. Roots are unchanged.
    pub fn normalize(&self) -> Result<(Self, f64)> {
        let scale = self.max_abs_coeff();
        if self.is_zero() || scale == 0.0 {
            return Err(Error::EmptyPolynomial);
        }
        Ok((self.scale(1.0 / scale), scale))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Multiplies by `w^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Exact division by `w^k`; `None` unless the `k` lowest coefficients are
    /// exactly zero.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if self.coeffs.len() < k || self.coeffs[..k].iter().any(|c| *c != Complex64::new(0.0, 0.0))
        {
            return None;
        }
        Some(Self::new(self.coeffs[k..].to_vec()))
    }

    /// Number of exactly-zero low-order coefficients, i.e. the order of the
    /// root at `w = 0` (0 for the zero polynomial).
    pub fn zero_root_order(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coeffs
            .iter()
            .take_while(|c| **c == Complex64::new(0.0, 0.0))
            .count()
    }

    /// Cauchy bound `1 + max_{k<deg} |a_k| / |a_deg|`: every root lies in the
    /// closed disc of this radius.
    pub fn cauchy_bound(&self) -> Result<f64> {
        let lead = self.leading().ok_or(Error::EmptyPolynomial)?.norm();
        let rest = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        Ok(1.0 + rest / lead)
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        ComplexPoly::new(
            (0..len)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + rhs.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ComplexPoly::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ComplexPoly::from_real(&[1.0, 2.0]).eval(c(-0.5, 0.0)), c(0.0, 0.0));
        assert_eq!(ComplexPoly::zero().eval(c(3.0, -1.0)), c(0.0, 0.0));
        assert_eq!(ComplexPoly::from_real(&[1.0, 6.0, 12.0]).eval(c(1.0, 0.0)), c(19.0, 0.0));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            ComplexPoly::from_real(&[1.0, 2.0]).derivative(),
            ComplexPoly::from_real(&[2.0])
        );
        assert_eq!(
            ComplexPoly::from_real(&[1.0, 6.0, 12.0]).derivative(),
            ComplexPoly::from_real(&[6.0, 24.0])
        );
        assert!(ComplexPoly::zero().derivative().is_zero());
    }

    #[test]
    fn normalize_examples() {
        let (p, s) = ComplexPoly::from_real(&[-0.5, 0.0, 4.0]).normalize().unwrap();
        assert_eq!(p, ComplexPoly::from_real(&[-0.125, 0.0, 1.0]));
        assert_eq!(s, 4.0);

        let (p, s) = ComplexPoly::from_real(&[1.0]).normalize().unwrap();
        assert_eq!((p, s), (ComplexPoly::from_real(&[1.0]), 1.0));

        let (p, s) = ComplexPoly::new(vec![c(0.0, 2.0)]).normalize().unwrap();
        assert_eq!((p, s), (ComplexPoly::new(vec![c(0.0, 1.0)]), 2.0));

        assert_eq!(ComplexPoly::zero().normalize(), Err(Error::EmptyPolynomial));
    }

    #[test]
    fn trims_exact_zeros_only() {
        let p = ComplexPoly::from_real(&[1.0, 1e-300, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(ComplexPoly::from_real(&[0.0, 0.0]).degree(), None);
    }

    #[test]
    fn shifts_and_zero_roots() {
        let p = ComplexPoly::from_real(&[0.0, 1.0, 4.0]);
        assert_eq!(p.zero_root_order(), 1);
        assert_eq!(p.shift_down(1), Some(ComplexPoly::from_real(&[1.0, 4.0])));
        assert_eq!(p.shift_down(2), None);
        assert_eq!(p.shift_down(1).unwrap().shift_up(1), p);
    }

    #[test]
    fn arithmetic() {
        let a = ComplexPoly::from_real(&[1.0, 2.0]);
        let b = ComplexPoly::from_real(&[-1.0, 2.0]);
        assert_eq!(&a * &b, ComplexPoly::from_real(&[-1.0, 0.0, 4.0]));
        assert_eq!(&a + &b, ComplexPoly::from_real(&[0.0, 4.0]));
        assert!((&a + &a.scale(-1.0)).is_zero());
    }

    #[test]
    fn cauchy_bound_contains_roots() {
        let p = ComplexPoly::from_real(&[-0.5, 0.0, 4.0]);
        let bound = p.cauchy_bound().unwrap();
        assert!(bound >= 0.5f64.sqrt() / 2.0);
        assert_eq!(bound, 1.125);
    }

    fn arb_poly() -> impl Strategy<Value = ComplexPoly> {
        prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..12)
            .prop_map(|v| ComplexPoly::new(v.into_iter().map(|(r, i)| c(r, i)).collect()))
    }

    proptest! {
        #[test]
        fn derivative_matches_central_difference(
            p in arb_poly(),
            re in -3.0f64..3.0,
            im in -3.0f64..3.0,
        ) {
            let w = c(re, im);
            let h = 1e-6 * (1.0 + w.norm());
            let fd = (p.eval(w + h) - p.eval(w - h)) / (2.0 * h);
            let exact = p.derivative().eval(w);
            // Relative to the derivative's own evaluation scale, so that
            // near-cancelling values do not blow up the comparison.
            let (_, scale) = p.derivative().eval_with_scale(w);
            let (_, pscale) = p.eval_with_scale(w);
            let noise = 1e-15 * pscale / h;
            prop_assert!((fd - exact).norm() <= 1e-6 * scale.max(1e-300) + noise);
        }

        #[test]
        fn eval_with_derivative_agrees(p in arb_poly(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let w = c(re, im);
            let (v, d) = p.eval_with_derivative(w);
            prop_assert!((v - p.eval(w)).norm() <= 1e-12 * (1.0 + v.norm()));
            let d2 = p.derivative().eval(w);
            prop_assert!((d - d2).norm() <= 1e-11 * (1.0 + d2.norm()));
        }
    }
}
