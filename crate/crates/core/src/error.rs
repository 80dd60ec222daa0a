use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty polynomial")]
    EmptyPolynomial,

    #[error("root iteration diverged (worst residual {residual:e})")]
    RootDiverged { residual: f64 },

    #[error("zero on contour near {at}")]
    ZeroOnContour { at: Complex64 },

    #[error("winding did not stabilize (raw winding {raw})")]
    WindingUnstable { raw: f64 },

    #[error("mode degree exceeds precision budget (n = {n}, cap = {cap})")]
    DegreeExceedsBudget { n: usize, cap: usize },

    #[error("pole of the variable map")]
    PoleOfVariableMap,

    #[error("pole proximity at {at}")]
    PoleProximity { at: Complex64 },

    #[error("recurrence overflow at order {order}")]
    RecurrenceOverflow { order: usize },

    #[error("glancing value: z - r0 = {value} lies on [0, inf)")]
    GlancingValue { value: f64 },

    #[error("nothing to fit")]
    NothingToFit,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RootDiverged { .. }
                | Error::ZeroOnContour { .. }
                | Error::WindingUnstable { .. }
                | Error::RecurrenceOverflow { .. }
                | Error::PoleProximity { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
