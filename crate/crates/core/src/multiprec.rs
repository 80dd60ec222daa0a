//! Multiprecision root refinement for the mode polynomials.
//!
//! The roots of `R_n` and `F_n` near `w = 0` are badly conditioned: their
//! relative condition number grows roughly like `2^(1.85 n)` (about 1e21 at
//! n = 40 and 1e35 at n = 64), so double precision cannot place them even
//! from exact coefficients. Coefficients are therefore formed exactly from
//! integers, and double-precision estimates are refined by Aberth iteration
//! at `64 + 2n` bits before rounding back to `f64`.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::UBig;
use num_complex::Complex64;

use crate::rootfind::Root;
use crate::{Error, Result};

type Real = FBig<HalfEven, 2>;

const MAX_ITERATIONS: usize = 500;

/// Working precision for a mode of degree `n`, in whole 64-bit limbs.
pub(crate) fn bits_for_degree(n: usize) -> usize {
    (64 + 2 * n).div_ceil(64) * 64
}

fn real(x: f64, bits: usize) -> Real {
    Real::try_from(x).expect("finite").with_precision(bits).value()
}

#[derive(Clone)]
struct Cx {
    re: Real,
    im: Real,
}

impl Cx {
    fn from_c64(z: Complex64, bits: usize) -> Self {
        Self { re: real(z.re, bits), im: real(z.im, bits) }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().value(), self.im.to_f64().value())
    }

    fn add(&self, o: &Cx) -> Cx {
        Cx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Cx) -> Cx {
        Cx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn add_real(&self, x: &Real) -> Cx {
        Cx { re: &self.re + x, im: self.im.clone() }
    }

    fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    fn inv(&self) -> Cx {
        let d = self.norm_sqr();
        Cx { re: &self.re / &d, im: -(&self.im / &d) }
    }

    fn div(&self, o: &Cx) -> Cx {
        self.mul(&o.inv())
    }

    fn is_zero(&self) -> bool {
        self.re == Real::ZERO && self.im == Real::ZERO
    }
}

/// Exact coefficients of `R_n` as integers, ascending.
pub(crate) fn bessel_coefficients(n: usize) -> Vec<UBig> {
    // a_m = (n+m)! / (m! (n−m)!), a_{m+1} = a_m (n+m+1)(n−m) / (m+1).
    let mut out = Vec::with_capacity(n + 1);
    let mut a = UBig::ONE;
    for m in 0..=n {
        out.push(a.clone());
        if m < n {
            a = a * UBig::from((n + m + 1) * (n - m)) / UBig::from(m + 1);
        }
    }
    out
}

/// `R_n` coefficients rounded to `bits`.
fn bessel_real(n: usize, bits: usize) -> Vec<Real> {
    bessel_coefficients(n)
        .into_iter()
        .map(|a| Real::from(a).with_precision(bits).value())
        .collect()
}

/// `F_n` coefficients, `F_k = c₀ r_k + k r_{k−1}` with `c₀ = (1−γ)/2`.
fn char_real(n: usize, gamma: f64, bits: usize) -> Vec<Real> {
    let r = bessel_coefficients(n);
    let c0 = (real(1.0, bits) - real(gamma, bits)) / real(2.0, bits);
    (0..=n + 1)
        .map(|k| {
            let head = if k <= n { &c0 * &Real::from(r[k].clone()).with_precision(bits).value() } else { real(0.0, bits) };
            let tail = if k >= 1 {
                Real::from(r[k - 1].clone() * UBig::from(k)).with_precision(bits).value()
            } else {
                real(0.0, bits)
            };
            head + tail
        })
        .collect()
}

/// Spreads each estimate of order `k` into `k` distinct starting points.
fn expand(estimates: &[Root]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for r in estimates {
        if r.order == 1 {
            out.push(r.value);
            continue;
        }
        let spread = 1e-6 * (1.0 + r.value.norm());
        for j in 0..r.order {
            let phase = std::f64::consts::TAU * j as f64 / r.order as f64 + 0.3;
            out.push(r.value + Complex64::from_polar(spread, phase));
        }
    }
    out
}

/// Aberth iteration on a real polynomial with ascending coefficients and no
/// root at zero.
fn aberth(coeffs: &[Real], start: &[Complex64], bits: usize) -> Result<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    debug_assert_eq!(start.len(), degree);
    let mut z: Vec<Cx> = start.iter().map(|&s| Cx::from_c64(s, bits)).collect();
    let mut done = vec![false; degree];
    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.to_f64().value().abs()).collect();
    // A root is final once its step or its backward error reaches the
    // working precision.
    let settle = 2f64.powi(-(bits as i32 - 16));
    let noise = 2f64.powi(-(bits as i32 - 8));
    for _ in 0..MAX_ITERATIONS {
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let zi = z[i].clone();
            let mut p = Cx { re: coeffs[degree].clone(), im: real(0.0, bits) };
            let mut dp = Cx { re: real(0.0, bits), im: real(0.0, bits) };
            for a in coeffs[..degree].iter().rev() {
                dp = dp.mul(&zi).add(&p);
                p = p.mul(&zi).add_real(a);
            }
            let modulus = zi.norm_sqr().to_f64().value().sqrt();
            let scale = abs_coeffs.iter().rev().fold(0.0, |acc, a| acc * modulus + a);
            if p.is_zero() || p.norm_sqr().to_f64().value().sqrt() <= noise * scale {
                done[i] = true;
                continue;
            }
            let newton = p.div(&dp);
            let mut repulsion = Cx { re: real(0.0, bits), im: real(0.0, bits) };
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    repulsion = repulsion.add(&zi.sub(zj).inv());
                }
            }
            let one = Cx { re: real(1.0, bits), im: real(0.0, bits) };
            let step = newton.div(&one.sub(&newton.mul(&repulsion)));
            z[i] = zi.sub(&step);
            let rel = (step.norm_sqr() / z[i].norm_sqr()).to_f64().value().sqrt();
            if !(rel > settle) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(z.iter().map(Cx::to_c64).collect());
        }
    }
    Err(Error::RootDiverged { residual: f64::NAN })
}

/// Rounds refined roots of a real polynomial: imaginary parts far below
/// double resolution are set to zero.
fn finish(values: Vec<Complex64>) -> Vec<Complex64> {
    values
        .into_iter()
        .map(|z| if z.im.abs() <= 1e-30 * z.norm() { Complex64::new(z.re, 0.0) } else { z })
        .collect()
}

/// Roots of `R_n` refined from the estimates `start`.
pub(crate) fn refine_bessel_roots(n: usize, start: &[Root]) -> Result<Vec<Complex64>> {
    let bits = bits_for_degree(n);
    Ok(finish(aberth(&bessel_real(n, bits), &expand(start), bits)?))
}

/// Roots of `R_n'` refined from `start`.
pub(crate) fn refine_bessel_critical_points(n: usize, start: &[Root]) -> Result<Vec<Complex64>> {
    let bits = bits_for_degree(n);
    let coeffs: Vec<Real> = bessel_coefficients(n)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(m, a)| Real::from(a * UBig::from(m)).with_precision(bits).value())
        .collect();
    Ok(finish(aberth(&coeffs, &expand(start), bits)?))
}

/// Nonzero roots of `F_n` refined from `start`; a root at zero (γ = 1) must
/// already be removed from `start` and is divided out here.
pub(crate) fn refine_char_roots(n: usize, gamma: f64, start: &[Root]) -> Result<Vec<Complex64>> {
    let bits = bits_for_degree(n);
    let mut coeffs = char_real(n, gamma, bits);
    while coeffs.first().is_some_and(|c| *c == Real::ZERO) {
        coeffs.remove(0);
    }
    Ok(finish(aberth(&coeffs, &expand(start), bits)?))
}
