use thiserror::Error;

/// Failure modes shared by all numerical routines in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported angular momentum l = {0}")]
    UnsupportedOrder(u32),

    #[error("numerical degeneracy: both tangent components vanish ({0})")]
    NumericalDegeneracy(String),

    #[error("pole of the critical-depth residual at q = {q}")]
    Pole { q: f64 },

    #[error("no root found for q in (0, {q_max}]")]
    NoRootFound { q_max: f64 },

    #[error("phase refinement exceeded {levels} bisection levels near E = {energy}")]
    RefinementLimit { levels: u32, energy: f64 },

    #[error("finite-difference step underflow at E = {energy}")]
    StepUnderflow { energy: f64 },

    #[error("phase difference over the finite-difference step is not branch-safe at E = {energy}")]
    BranchFold { energy: f64 },

    #[error("log-log fit is degenerate: {0}")]
    FitDegenerate(String),

    #[error("Numerov phase did not converge: step-halving change {change:.3e} at E = {energy}")]
    NonConvergence { energy: f64, change: f64 },
}

impl Error {
    /// Errors caused by invalid input rather than by a numerical breakdown.
    pub fn is_argument_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::Domain(_) | Error::UnsupportedOrder(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite, got {value}"
        )))
    }
}
