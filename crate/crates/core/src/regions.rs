//! Eigenvalue-location regions in `Re λ < 0`, constant fitting, and the
//! semiclassical change of variables `λ = i√z / h`.
//!
//! The constants in the location theorems are existential. They are reported
//! here as fitted suprema over a computed spectrum, never assumed.
//!
//! Angles follow the convention `arg λ ∈ (π/2, 3π/2)` for `Re λ < 0`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spectrum::Eigenvalue;
use crate::{Error, Result};

/// A fully specified region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegionSpec {
    /// `|Re λ| ≤ C (|Im λ|^{1/2+ε} + 1)`.
    LambdaEps { eps: f64, c: f64 },
    /// `|Im λ| ≤ C (|Re λ| + 1)^{−N}`.
    Rn { n: u32, c: f64 },
    /// `|λ| ≤ R0` or membership in `R_N`.
    DiscPlusRn { r0: f64, n: u32, c: f64 },
    /// `π/4 < |π − arg λ| < π/2` and `|λ| > cos(arg λ) / ((1−γ) cos(2 arg λ))`.
    Sector { gamma: f64 },
    /// `|Im λ| ≤ tol` and `Re λ ≤ −1/(γ−1) + tol`; empty at γ = 1.
    RealRay { gamma: f64, tol: f64 },
}

/// `arg λ` in `[π/2, 3π/2]` for `Re λ ≤ 0`.
pub fn arg_left(lambda: Complex64) -> f64 {
    let a = lambda.arg();
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

impl RegionSpec {
    pub fn contains(&self, lambda: Complex64) -> bool {
        if !(lambda.re < 0.0) {
            return false;
        }
        match *self {
            RegionSpec::LambdaEps { eps, c } => FitFamily::LambdaEps { eps }.ratio(lambda) <= c,
            RegionSpec::Rn { n, c } => in_rn(lambda, n, c),
            RegionSpec::DiscPlusRn { r0, n, c } => lambda.norm() <= r0 || in_rn(lambda, n, c),
            RegionSpec::Sector { gamma } => {
                let theta = arg_left(lambda);
                let off_axis = (PI - theta).abs();
                if !(off_axis > FRAC_PI_4 && off_axis < FRAC_PI_2) {
                    return false;
                }
                let bound = theta.cos() / ((1.0 - gamma) * (2.0 * theta).cos());
                lambda.norm() > bound
            }
            RegionSpec::RealRay { gamma, tol } => {
                lambda.im.abs() <= tol && lambda.re <= -1.0 / (gamma - 1.0) + tol
            }
        }
    }

    /// Checks parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
        match *self {
            RegionSpec::LambdaEps { eps, c } => {
                if !(eps > 0.0 && eps < 0.5) {
                    return bad("lambda-eps needs 0 < eps < 1/2");
                }
                if !(c >= 0.0) {
                    return bad("lambda-eps needs C >= 0");
                }
            }
            RegionSpec::Rn { n, c } | RegionSpec::DiscPlusRn { n, c, .. } => {
                if n < 1 {
                    return bad("R_N needs N >= 1");
                }
                if !(c >= 0.0) {
                    return bad("R_N needs C >= 0");
                }
                if let RegionSpec::DiscPlusRn { r0, .. } = *self {
                    if !(r0 >= 0.0) {
                        return bad("disc radius must be nonnegative");
                    }
                }
            }
            RegionSpec::Sector { gamma } => {
                if !(gamma > 0.0 && gamma < 1.0) {
                    return bad("sector needs 0 < gamma < 1");
                }
            }
            RegionSpec::RealRay { gamma, tol } => {
                // γ = 1 is admitted: the ray is then empty.
                if !(gamma >= 1.0) {
                    return bad("real-ray needs gamma >= 1");
                }
                if !(tol >= 0.0) {
                    return bad("real-ray tolerance must be nonnegative");
                }
            }
        }
        Ok(())
    }
}

// Evaluated in ratio form so that a fitted constant admits its own data
// without rounding slack.
fn in_rn(lambda: Complex64, n: u32, c: f64) -> bool {
    FitFamily::Rn { n }.ratio(lambda) <= c
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionSpec::LambdaEps { eps, c } => write!(f, "lambda-eps:{eps}:{c}"),
            RegionSpec::Rn { n, c } => write!(f, "rn:{n}:{c}"),
            RegionSpec::DiscPlusRn { r0, n, c } => write!(f, "disc-rn:{r0}:{n}:{c}"),
            RegionSpec::Sector { gamma } => write!(f, "sector (gamma = {gamma})"),
            RegionSpec::RealRay { gamma, tol } => write!(f, "real-ray:{tol} (gamma = {gamma})"),
        }
    }
}

/// Region families whose constant is fitted from data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitFamily {
    LambdaEps { eps: f64 },
    Rn { n: u32 },
}

impl FitFamily {
    /// The quantity that must stay below `C` for membership.
    pub fn ratio(&self, lambda: Complex64) -> f64 {
        match *self {
            FitFamily::LambdaEps { eps } => lambda.re.abs() / (lambda.im.abs().powf(0.5 + eps) + 1.0),
            FitFamily::Rn { n } => lambda.im.abs() * (lambda.re.abs() + 1.0).powi(n as i32),
        }
    }

    pub fn with_constant(&self, c: f64) -> RegionSpec {
        match *self {
            FitFamily::LambdaEps { eps } => RegionSpec::LambdaEps { eps, c },
            FitFamily::Rn { n } => RegionSpec::Rn { n, c },
        }
    }
}

/// Smallest constant putting every eigenvalue in the family's region.
pub fn fit_constant(family: FitFamily, eigs: &[Eigenvalue]) -> Result<f64> {
    if eigs.is_empty() {
        return Err(Error::NothingToFit);
    }
    Ok(eigs.iter().map(|e| family.ratio(e.lambda)).fold(0.0, f64::max))
}

/// Smallest disc radius `R0` such that every eigenvalue outside `R_N(C)` lies
/// in `|λ| ≤ R0`; zero when all of them are in `R_N(C)`.
pub fn fit_disc_radius(n: u32, c: f64, eigs: &[Eigenvalue]) -> Result<f64> {
    if eigs.is_empty() {
        return Err(Error::NothingToFit);
    }
    Ok(eigs
        .iter()
        .filter(|e| !in_rn(e.lambda, n, c))
        .map(|e| e.lambda.norm())
        .fold(0.0, f64::max))
}

/// A region parsed from text, possibly with constants left to be fitted.
///
/// Grammar: `lambda-eps:EPS[:C]`, `rn:N[:C]`, `disc-rn:R0:N[:C]`, `sector`,
/// `real-ray[:TOL]`. The sector and ray regions take γ from the run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionTemplate {
    LambdaEps { eps: f64, c: Option<f64> },
    Rn { n: u32, c: Option<f64> },
    DiscPlusRn { r0: f64, n: u32, c: Option<f64> },
    Sector,
    RealRay { tol: f64 },
}

pub const DEFAULT_RAY_TOL: f64 = 1e-8;

/// A resolved region together with whatever constants had to be fitted.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRegion {
    pub spec: RegionSpec,
    pub fitted: Vec<(String, f64)>,
}

impl RegionTemplate {
    /// Fills in γ and fits missing constants. With no eigenvalues a missing
    /// constant resolves to zero, which makes membership vacuous.
    pub fn resolve(&self, gamma: f64, eigs: &[Eigenvalue]) -> Result<ResolvedRegion> {
        let mut fitted = Vec::new();
        let mut fit = |family: FitFamily, given: Option<f64>| -> Result<f64> {
            match given {
                Some(c) => Ok(c),
                None => {
                    let c = if eigs.is_empty() { 0.0 } else { fit_constant(family, eigs)? };
                    fitted.push(("C".to_string(), c));
                    Ok(c)
                }
            }
        };
        let spec = match *self {
            RegionTemplate::LambdaEps { eps, c } => {
                RegionSpec::LambdaEps { eps, c: fit(FitFamily::LambdaEps { eps }, c)? }
            }
            RegionTemplate::Rn { n, c } => RegionSpec::Rn { n, c: fit(FitFamily::Rn { n }, c)? },
            RegionTemplate::DiscPlusRn { r0, n, c } => {
                RegionSpec::DiscPlusRn { r0, n, c: fit(FitFamily::Rn { n }, c)? }
            }
            RegionTemplate::Sector => RegionSpec::Sector { gamma },
            RegionTemplate::RealRay { tol } => RegionSpec::RealRay { gamma, tol },
        };
        spec.validate()?;
        Ok(ResolvedRegion { spec, fitted })
    }
}

impl FromStr for RegionTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidInput(format!("bad region {s:?}: {why}"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let float = |v: &str| v.parse::<f64>().map_err(|_| bad("expected a number"));
        let int = |v: &str| v.parse::<u32>().map_err(|_| bad("expected an integer"));
        match parts.as_slice() {
            ["lambda-eps", eps] => Ok(Self::LambdaEps { eps: float(eps)?, c: None }),
            ["lambda-eps", eps, c] => Ok(Self::LambdaEps { eps: float(eps)?, c: Some(float(c)?) }),
            ["rn", n] => Ok(Self::Rn { n: int(n)?, c: None }),
            ["rn", n, c] => Ok(Self::Rn { n: int(n)?, c: Some(float(c)?) }),
            ["disc-rn", r0, n] => Ok(Self::DiscPlusRn { r0: float(r0)?, n: int(n)?, c: None }),
            ["disc-rn", r0, n, c] => {
                Ok(Self::DiscPlusRn { r0: float(r0)?, n: int(n)?, c: Some(float(c)?) })
            }
            ["sector"] => Ok(Self::Sector),
            ["real-ray"] => Ok(Self::RealRay { tol: DEFAULT_RAY_TOL }),
            ["real-ray", tol] => Ok(Self::RealRay { tol: float(tol)? }),
            _ => Err(bad("unknown form")),
        }
    }
}

/// Semiclassical coordinates with `|z| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Semiclassical {
    pub z: Complex64,
    pub h: f64,
}

/// `√z` on the branch `0 ≤ arg z < 2π`, so that `Im √z ≥ 0`.
pub fn sqrt_upper(z: Complex64) -> Complex64 {
    let mut a = z.arg();
    if a < 0.0 {
        a += TAU;
    }
    Complex64::from_polar(z.norm().sqrt(), 0.5 * a)
}

/// `h = 1/|λ|`, `z = −λ²/|λ|²`, so that `λ = i√z/h`.
pub fn to_semiclassical(lambda: Complex64) -> Result<Semiclassical> {
    if !(lambda.re < 0.0) {
        return Err(Error::Domain(format!("semiclassical map needs Re lambda < 0, got {lambda}")));
    }
    let m2 = lambda.norm_sqr();
    Ok(Semiclassical { z: -(lambda * lambda) / m2, h: 1.0 / m2.sqrt() })
}

pub fn from_semiclassical(s: Semiclassical) -> Complex64 {
    Complex64::new(0.0, 1.0) * sqrt_upper(s.z) / s.h
}

/// Outcome of the growth-exponent check for complex eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ScalingCheck {
    InsufficientData { usable: usize },
    Fitted { slope: f64, limit: f64, pass: bool },
}

/// Least-squares slope of `log|Re λ|` against `log|Im λ|` over eigenvalues
/// with `|Im λ| ≥ 10`, compared with `1/2 + ε + 0.1`. Needs at least five
/// such eigenvalues.
pub fn scaling_slope(eigs: &[Eigenvalue], eps: f64) -> ScalingCheck {
    let pts: Vec<(f64, f64)> = eigs
        .iter()
        .filter(|e| e.lambda.im.abs() >= 10.0 && e.lambda.re != 0.0)
        .map(|e| (e.lambda.im.abs().ln(), e.lambda.re.abs().ln()))
        .collect();
    if pts.len() < 5 {
        return ScalingCheck::InsufficientData { usable: pts.len() };
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let limit = 0.5 + eps + 0.1;
    if sxx == 0.0 {
        return ScalingCheck::InsufficientData { usable: pts.len() };
    }
    let slope = sxy / sxx;
    ScalingCheck::Fitted { slope, limit, pass: slope <= limit }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eig(lambda: Complex64) -> Eigenvalue {
        Eigenvalue { lambda, mode_n: 0, w_root: -0.5 / lambda, root_order: 1, multiplicity: 1, residual: 0.0 }
    }

    #[test]
    fn contains_examples() {
        assert!(!RegionSpec::Sector { gamma: 0.5 }.contains(c(-1.0, 0.0)));
        assert!(RegionSpec::RealRay { gamma: 2.0, tol: 1e-8 }.contains(c(-2f64.sqrt(), 0.0)));
        assert!(RegionSpec::LambdaEps { eps: 0.1, c: 10.0 }.contains(c(-1.0, 100.0)));
    }

    #[test]
    fn right_half_plane_is_never_inside() {
        let regions = [
            RegionSpec::LambdaEps { eps: 0.1, c: 1e9 },
            RegionSpec::Rn { n: 1, c: 1e9 },
            RegionSpec::DiscPlusRn { r0: 1e9, n: 1, c: 1e9 },
            RegionSpec::Sector { gamma: 0.5 },
            RegionSpec::RealRay { gamma: 2.0, tol: 1e9 },
        ];
        for r in regions {
            assert!(!r.contains(c(0.0, 1.0)));
            assert!(!r.contains(c(1.0, -2.0)));
        }
    }

    #[test]
    fn sector_angle_and_radius() {
        let r = RegionSpec::Sector { gamma: 0.5 };
        // arg = 2π/3: |π − arg| = π/3; bound = cos(2π/3)/(0.5 cos(4π/3)) = 2.
        let dir = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!(!r.contains(dir * 1.9));
        assert!(r.contains(dir * 2.1));
        assert!(r.contains(dir.conj() * 2.1));
        // Inside the π/4 cone around the negative axis.
        assert!(!r.contains(c(-10.0, 5.0)));
    }

    #[test]
    fn fit_examples() {
        let v = fit_constant(FitFamily::LambdaEps { eps: 0.0 }, &[eig(c(-2.0, 4.0))]).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(fit_constant(FitFamily::Rn { n: 2 }, &[eig(c(-3.0, 0.0))]).unwrap(), 0.0);
        let two = [eig(c(-2.0, 4.0)), eig(c(-9.0, 1.0))];
        let each: Vec<f64> = two
            .iter()
            .map(|e| fit_constant(FitFamily::LambdaEps { eps: 0.0 }, std::slice::from_ref(e)).unwrap())
            .collect();
        let both = fit_constant(FitFamily::LambdaEps { eps: 0.0 }, &two).unwrap();
        assert_eq!(both, each[0].max(each[1]));
        assert_eq!(fit_constant(FitFamily::Rn { n: 1 }, &[]), Err(Error::NothingToFit));
    }

    #[test]
    fn disc_radius_fit() {
        let eigs = [eig(c(-1.0, 0.5)), eig(c(-5.0, 0.0)), eig(c(-2.0, -2.0))];
        let r0 = fit_disc_radius(3, 1e-3, &eigs).unwrap();
        assert!((r0 - 8f64.sqrt()).abs() < 1e-15);
        let spec = RegionSpec::DiscPlusRn { r0, n: 3, c: 1e-3 };
        assert!(eigs.iter().all(|e| spec.contains(e.lambda)));
    }

    #[test]
    fn semiclassical_examples() {
        let s = to_semiclassical(c(-1.0, 0.0)).unwrap();
        assert!((s.z - c(-1.0, 0.0)).norm() < 1e-15 && s.h == 1.0);
        let s = to_semiclassical(c(-1.0, 1.0)).unwrap();
        assert!((s.z - c(0.0, 1.0)).norm() < 1e-15);
        assert!((s.h - 0.5f64.sqrt()).abs() < 1e-15);
        let s = to_semiclassical(c(-2.0, 0.0)).unwrap();
        assert!((s.z - c(-1.0, 0.0)).norm() < 1e-15 && s.h == 0.5);
        assert!(to_semiclassical(c(0.0, 3.0)).is_err());
        assert!(to_semiclassical(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn branch_of_sqrt() {
        assert!((sqrt_upper(c(0.0, 1.0)) - Complex64::from_polar(1.0, FRAC_PI_4)).norm() < 1e-15);
        assert!((sqrt_upper(c(-1.0, 0.0)) - c(0.0, 1.0)).norm() < 1e-15);
        // arg(−i) = 3π/2 on this branch.
        assert!(sqrt_upper(c(0.0, -1.0)).im > 0.0);
        assert!(sqrt_upper(c(0.0, -1.0)).re < 0.0);
    }

    #[test]
    fn template_parsing() {
        assert_eq!("lambda-eps:0.1".parse::<RegionTemplate>().unwrap(), RegionTemplate::LambdaEps { eps: 0.1, c: None });
        assert_eq!("rn:5:2".parse::<RegionTemplate>().unwrap(), RegionTemplate::Rn { n: 5, c: Some(2.0) });
        assert_eq!(
            "disc-rn:3:5".parse::<RegionTemplate>().unwrap(),
            RegionTemplate::DiscPlusRn { r0: 3.0, n: 5, c: None }
        );
        assert_eq!("sector".parse::<RegionTemplate>().unwrap(), RegionTemplate::Sector);
        assert_eq!("real-ray".parse::<RegionTemplate>().unwrap(), RegionTemplate::RealRay { tol: 1e-8 });
        assert_eq!("real-ray:0.5".parse::<RegionTemplate>().unwrap(), RegionTemplate::RealRay { tol: 0.5 });
        for bad in ["", "rn", "rn:x", "lambda-eps:0.1:2:3", "circle:1"] {
            assert!(bad.parse::<RegionTemplate>().is_err(), "{bad}");
        }
    }

    #[test]
    fn resolve_validates_and_fits() {
        let eigs = [eig(c(-2.0, 4.0))];
        let r = "lambda-eps:0.1".parse::<RegionTemplate>().unwrap().resolve(0.5, &eigs).unwrap();
        assert_eq!(r.fitted.len(), 1);
        assert!(r.spec.contains(c(-2.0, 4.0)));
        assert!("sector".parse::<RegionTemplate>().unwrap().resolve(2.0, &eigs).is_err());
        assert!("real-ray".parse::<RegionTemplate>().unwrap().resolve(0.5, &eigs).is_err());
        assert!("lambda-eps:0.7:1".parse::<RegionTemplate>().unwrap().resolve(0.5, &eigs).is_err());
    }

    #[test]
    fn scaling_needs_five_points() {
        let few: Vec<_> = (1..4).map(|k| eig(c(-(k as f64), 20.0 * k as f64))).collect();
        assert_eq!(scaling_slope(&few, 0.05), ScalingCheck::InsufficientData { usable: 3 });
        // |Re λ| = |Im λ|^{1/2} exactly.
        let many: Vec<_> = (1..8)
            .map(|k| {
                let im = 10.0 * 2f64.powi(k);
                eig(c(-im.sqrt(), im))
            })
            .collect();
        match scaling_slope(&many, 0.05) {
            ScalingCheck::Fitted { slope, pass, .. } => {
                assert!((slope - 0.5).abs() < 1e-12);
                assert!(pass);
            }
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn semiclassical_round_trip(re in -1e3f64..-1e-3, im in -1e3f64..1e3) {
            let lambda = c(re, im);
            let s = to_semiclassical(lambda).unwrap();
            prop_assert!((s.z.norm() - 1.0).abs() < 1e-14);
            let back = from_semiclassical(s);
            prop_assert!((back - lambda).norm() <= 1e-12 * lambda.norm());
        }

        #[test]
        fn fitted_constant_admits_every_input(
            pts in prop::collection::vec((-50.0f64..-1e-3, -50.0f64..50.0), 1..20),
            eps in 0.01f64..0.49,
            n in 1u32..6,
        ) {
            let eigs: Vec<_> = pts.iter().map(|&(r, i)| eig(c(r, i))).collect();
            for family in [FitFamily::LambdaEps { eps }, FitFamily::Rn { n }] {
                let spec = family.with_constant(fit_constant(family, &eigs).unwrap());
                prop_assert!(eigs.iter().all(|e| spec.contains(e.lambda)));
            }
        }
    }
}
