//! Per-mode characteristic objects for the ball.
//!
//! With `w = i/(2x)` the spherical Hankel function factors as
//! `h_n^(1)(x) = (−i)^{n+1} e^{ix}/x · R_n(w)` where
//! `R_n(w) = Σ_m (n+m)!/(m!(n−m)!) w^m`. Substituting `μ = i/(2w)` into the
//! boundary operator gives `F_n(w) = −C(n; μ, γ) · w · R_n(w)` with
//! `F_n(w) = [(1−γ)/2 + w] R_n(w) + w² R_n'(w)`.
//!
//! [`eval_c`] evaluates `C(n; μ, γ)` from the Hankel recurrence alone and is
//! the independent check on roots obtained from `F_n`.

use num_complex::Complex64;

use crate::polynomial::ComplexPoly;
use crate::multiprec;
use crate::rootfind::{self, Root, Sample};
use crate::{Error, Result};

/// Largest supported mode degree.
pub const N_CAP: usize = 64;

const RECURRENCE_LIMIT: f64 = 1e300;
const POLE_DISTANCE: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_degree(n: usize) -> Result<()> {
    if n > N_CAP {
        return Err(Error::DegreeExceedsBudget { n, cap: N_CAP });
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    Ok(())
}

/// Double-precision estimates of the roots of `p`, refined by `refine`. Falls
/// back to evenly spread starting points when the estimates do not converge.
fn refined_roots<F>(p: &ComplexPoly, tol: f64, refine: F) -> Result<Vec<Root>>
where
    F: Fn(&[Root]) -> Result<Vec<Complex64>>,
{
    let start = match rootfind::roots(p, tol) {
        Ok(r) => r,
        Err(Error::RootDiverged { .. }) => {
            let degree = p.degree().unwrap_or(0);
            let c = p.coeffs();
            let radius = (c[0].norm() / c[degree].norm()).powf(1.0 / degree as f64);
            (0..degree)
                .map(|k| Root {
                    value: Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / degree as f64 + 0.4),
                    order: 1,
                })
                .collect()
        }
        Err(e) => return Err(e),
    };
    let mut roots = rootfind::merge_clusters(&refine(&start)?);
    rootfind::sort_roots(&mut roots);
    Ok(roots)
}

/// Roots of `R_n'` (critical points of `R_n`), accurate to double precision.
pub fn bessel_critical_points(n: usize, tol: f64) -> Result<Vec<Root>> {
    let rp = bessel_poly(n)?.derivative();
    if rp.degree().map_or(true, |d| d == 0) {
        return Ok(Vec::new());
    }
    refined_roots(&rp, tol, |s| multiprec::refine_bessel_critical_points(n, s))
}

/// Nonzero roots of `F_n`, accurate to double precision. The root at `w = 0`
/// (present exactly when γ = 1) maps to no finite λ and is left out.
pub fn char_roots(n: usize, gamma: f64, tol: f64) -> Result<Vec<Root>> {
    let f = char_poly(n, gamma)?;
    let k = f.zero_root_order();
    let deflated = f.shift_down(k).expect("low coefficients are zero");
    if deflated.degree() == Some(0) {
        return Ok(Vec::new());
    }
    refined_roots(&deflated, tol, |s| multiprec::refine_char_roots(n, gamma, s))
}

/// `R_n` from `R_n = (4n − 2) w R_{n−1} + R_{n−2}`, `R_0 = 1`, `R_1 = 1 + 2w`.
pub fn bessel_poly(n: usize) -> Result<ComplexPoly> {
    check_degree(n)?;
    let mut prev = vec![1.0];
    if n == 0 {
        return Ok(ComplexPoly::from_real(&prev));
    }
    let mut cur = vec![1.0, 2.0];
    for k in 2..=n {
        let factor = (4 * k - 2) as f64;
        let mut next = vec![0.0; k + 1];
        for (m, &c) in cur.iter().enumerate() {
            next[m + 1] += factor * c;
        }
        for (m, &c) in prev.iter().enumerate() {
            next[m] += c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(ComplexPoly::from_real(&cur))
}

/// `(n+m)!/(m!(n−m)!)` in exact integer arithmetic, `None` on overflow or
/// `m > n`. Used to validate the recurrence.
pub fn bessel_coefficient_exact(n: u32, m: u32) -> Option<u128> {
    if m > n {
        return None;
    }
    // C(n+m, m) · n!/(n−m)!
    let mut binom: u128 = 1;
    for k in 1..=m as u128 {
        binom = binom.checked_mul(n as u128 + k)? / k;
    }
    let mut falling: u128 = 1;
    for k in (n - m + 1)..=n {
        falling = falling.checked_mul(k as u128)?;
    }
    binom.checked_mul(falling)
}

/// `F_n(w) = [(1−γ)/2 + w] R_n(w) + w² R_n'(w)`.
pub fn char_poly(n: usize, gamma: f64) -> Result<ComplexPoly> {
    check_gamma(gamma)?;
    let r = bessel_poly(n)?;
    Ok(char_poly_from(&r, gamma))
}

fn char_poly_from(r: &ComplexPoly, gamma: f64) -> ComplexPoly {
    let linear = ComplexPoly::from_real(&[0.5 * (1.0 - gamma), 1.0]);
    &(&linear * r) + &r.derivative().shift_up(2)
}

/// `λ = −1/(2w)`.
pub fn lambda_from_w(w: Complex64) -> Result<Complex64> {
    if w == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleOfVariableMap);
    }
    Ok(-0.5 / w)
}

/// `w = −1/(2λ)`; the map is an involution.
pub fn w_from_lambda(lambda: Complex64) -> Result<Complex64> {
    lambda_from_w(lambda)
}

/// `μ = −iλ`.
pub fn mu_from_lambda(lambda: Complex64) -> Complex64 {
    -I * lambda
}

/// `λ = iμ`.
pub fn lambda_from_mu(mu: Complex64) -> Complex64 {
    I * mu
}

/// `C(n; μ, γ) = ∂_r[h_n(μr)/h_n(μ)]_{r=1} − iμγ` together with the magnitude
/// of the terms that produce it.
///
/// Uses only the Hankel recurrence: with `q_k = h_{k−1}/h_k`,
/// `q_1 = iμ/(μ + i)` and `q_{k+1} = 1/((2k+1)/μ − q_k)`, and
/// `μ h_n'/h_n = μ q_n − (n + 1)`. The common `e^{iμ}/μ` factor never
/// appears.
pub fn eval_c_sample(n: usize, mu: Complex64, gamma: f64) -> Result<Sample> {
    if mu == Complex64::new(0.0, 0.0) || !mu.is_finite() {
        return Err(Error::Domain("C(n; mu, gamma) needs mu != 0".into()));
    }
    let damping = -I * mu * gamma;
    if n == 0 {
        let value = I * mu * (1.0 - gamma) - 1.0;
        return Ok(Sample { value, scale: mu.norm() * (1.0 + gamma) + 1.0 });
    }
    // q_k = h_{k-1}/h_k; either ratio of consecutive h beyond the limit
    // counts as overflow.
    let out_of_range = |q: Complex64| {
        let m = q.norm();
        !q.is_finite() || !(m <= RECURRENCE_LIMIT && m >= 1.0 / RECURRENCE_LIMIT)
    };
    let mut q = I * mu / (mu + I);
    if out_of_range(q) {
        return Err(Error::RecurrenceOverflow { order: 1 });
    }
    for k in 1..n {
        q = ((2 * k + 1) as f64 / mu - q).inv();
        if out_of_range(q) {
            return Err(Error::RecurrenceOverflow { order: k + 1 });
        }
    }
    let log_deriv = mu * q;
    let tail = (n + 1) as f64;
    Ok(Sample {
        value: log_deriv - tail + damping,
        scale: log_deriv.norm() + tail + damping.norm(),
    })
}

pub fn eval_c(n: usize, mu: Complex64, gamma: f64) -> Result<Complex64> {
    eval_c_sample(n, mu, gamma).map(|s| s.value)
}

/// `R_n`, `F_n` and the roots of `R_n` for one mode and damping constant.
#[derive(Debug, Clone)]
pub struct ModeFamily {
    n: usize,
    gamma: f64,
    r: ComplexPoly,
    r_prime: ComplexPoly,
    f: ComplexPoly,
    r_roots: Vec<Root>,
}

impl ModeFamily {
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        Self::with_tol(n, gamma, rootfind::DEFAULT_TOL)
    }

    pub fn with_tol(n: usize, gamma: f64, tol: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let r = bessel_poly(n)?;
        let r_prime = r.derivative();
        let f = char_poly_from(&r, gamma);
        let r_roots = if n == 0 { Vec::new() } else { refined_roots(&r, tol, |s| multiprec::refine_bessel_roots(n, s))? };
        Ok(Self { n, gamma, r, r_prime, f, r_roots })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn bessel(&self) -> &ComplexPoly {
        &self.r
    }

    pub fn bessel_derivative(&self) -> &ComplexPoly {
        &self.r_prime
    }

    pub fn char_poly(&self) -> &ComplexPoly {
        &self.f
    }

    /// Roots `z_j` of `R_n` with their orders.
    pub fn bessel_roots(&self) -> &[Root] {
        &self.r_roots
    }

    /// `F_n` with the root at `w = 0` divided out when `F_n(0) = 0`
    /// (exactly when γ = 1). That root maps to no finite λ.
    pub fn eigen_poly(&self) -> ComplexPoly {
        let k = self.f.zero_root_order();
        self.f.shift_down(k).expect("low coefficients are zero")
    }

    fn check_poles(&self, w: Complex64) -> Result<()> {
        if w.norm() < POLE_DISTANCE
            || self.r_roots.iter().any(|z| (w - z.value).norm() < POLE_DISTANCE)
        {
            return Err(Error::PoleProximity { at: w });
        }
        Ok(())
    }

    /// `g_n(w) = (1−γ)/(2w²) + 1/w + Σ_j 1/(w − z_j)` from the cached roots.
    pub fn eval_g(&self, w: Complex64) -> Result<Complex64> {
        self.check_poles(w)?;
        let head = 0.5 * (1.0 - self.gamma) / (w * w) + w.inv();
        let tail: Complex64 = self
            .r_roots
            .iter()
            .map(|z| (w - z.value).inv() * z.order as f64)
            .sum();
        Ok(head + tail)
    }

    /// `Re g_n(w)` from the expanded real-part formula
    /// `[(1−γ)((Re w)² − (Im w)²) + 2 Re w |w|²]/(2|w|⁴) + Σ_j (Re w − Re z_j)/|w − z_j|²`.
    pub fn re_g_decomposed(&self, w: Complex64) -> Result<f64> {
        self.check_poles(w)?;
        let m2 = w.norm_sqr();
        let head = ((1.0 - self.gamma) * (w.re * w.re - w.im * w.im) + 2.0 * w.re * m2)
            / (2.0 * m2 * m2);
        let tail: f64 = self
            .r_roots
            .iter()
            .map(|z| z.order as f64 * (w.re - z.value.re) / (w - z.value).norm_sqr())
            .sum();
        Ok(head + tail)
    }

    /// The bracket multiplying `Im w₀` in the imaginary part of `g_n(w₀)`
    /// after pairing conjugate roots:
    /// `(γ−1)/(2|w₀|²) − Σ_j Re z_j/|w₀−z_j|² + Σ_{Im z_j>0} 4 Re w₀ (Im z_j)²/(|w₀−z_j|²|w₀−z̄_j|²)`.
    ///
    /// Positive whenever `γ ≥ 1` and every `Re z_j < 0`, which forces roots of
    /// `F_n` in `Re w > 0` onto the real axis.
    pub fn imag_bracket(&self, w0: Complex64) -> f64 {
        let m2 = w0.norm_sqr();
        let mut total = (self.gamma - 1.0) / (2.0 * m2);
        for z in &self.r_roots {
            let order = z.order as f64;
            total -= order * z.value.re / (w0 - z.value).norm_sqr();
            if z.value.im > 0.0 {
                total += order * 4.0 * w0.re * z.value.im * z.value.im
                    / ((w0 - z.value).norm_sqr() * (w0 - z.value.conj()).norm_sqr());
            }
        }
        total
    }

    /// `C(n; μ, γ)` at the point λ = −1/(2w), via the Hankel path.
    pub fn eval_c_at_w(&self, w: Complex64) -> Result<Complex64> {
        let lambda = lambda_from_w(w)?;
        eval_c(self.n, mu_from_lambda(lambda), self.gamma)
    }
}
