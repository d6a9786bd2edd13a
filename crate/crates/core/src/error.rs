use thiserror::Error;

/// Which modelling assumption a call relied on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assumption {
    /// The uncertainty radius must not exceed the weakest estimated coefficient.
    RadiusBelowMinMagnitude,
    /// Discrete worst-case results need at least two quantization bits.
    AtLeastTwoBits,
}

impl std::fmt::Display for Assumption {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Assumption::RadiusBelowMinMagnitude => f.write_str("delta <= min |h_hat|"),
            Assumption::AtLeastTwoBits => f.write_str("b >= 2"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated ({assumption}): {detail}")]
    AssumptionViolated {
        assumption: Assumption,
        detail: String,
    },

    #[error("problem is infeasible: {0}")]
    Infeasible(String),

    #[error("degenerate argument: {0}")]
    Degenerate(String),

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("solver did not converge after {iterations} Newton steps (gap estimate {gap:.3e}, decrement {decrement:.3e})")]
    SolverFailed {
        iterations: usize,
        gap: f64,
        decrement: f64,
        /// Last strictly feasible iterate, fractional activation `y / t`.
        last_x: Vec<f64>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
