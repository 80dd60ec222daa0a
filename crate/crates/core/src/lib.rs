//! Point spectrum of the generator of the wave semigroup with the dissipative
//! boundary condition `∂_ν u − γ ∂_t u = 0` outside the unit ball in R³.
//!
//! On spherical-harmonic mode `n` the eigenvalue problem reduces to the zeros
//! of the characteristic polynomial
//!
//! ```text
//! F_n(w) = [(1 − γ)/2 + w] R_n(w) + w² R_n'(w),     λ = −1/(2w),
//! ```
//!
//! where `R_n` is the Bessel polynomial appearing in the closed form of the
//! spherical Hankel function `h_n^(1)`. Eigenvalues are the images of roots
//! with `Re w > 0`; every one of them has multiplicity `2n + 1`.
//!
//! Module map:
//!
//! - [`polynomial`]: dense complex polynomials.
//! - [`rootfind`]: Aberth–Ehrlich root finding and argument-principle winding.
//! - [`mode_family`]: `R_n`, `F_n`, the Hankel-quotient `C(n; μ, γ)` and the
//!   partial-fraction function `g_n`.
//! - [`spectrum`]: per-mode and full eigenvalue enumeration.
//! - [`regions`]: eigenvalue-location predicates and constant fits.
//! - [`trace_count`]: contour counting of eigenvalues through `C(n; μ, γ)`.
//! - [`symbol_checks`]: grid checks of the scalar symbol inequalities.

pub mod error;
pub mod mode_family;
mod multiprec;
pub mod polynomial;
pub mod regions;
pub mod rootfind;
pub mod spectrum;
pub mod symbol_checks;
pub mod trace_count;

pub use error::{Error, Result};
pub use num_complex::Complex64;
