//! Error type shared by every module of the crate.

/// Failures surfaced by the model, analytic and simulation engines.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// `p1_sq - p2_sq * tau1 <= 0`: the near user cannot cancel the far user's signal.
    #[error("successive interference cancellation infeasible: p1_sq - p2_sq*tau1 = {margin} (tau1 = {tau1})")]
    InfeasibleSic { tau1: f64, margin: f64 },

    #[error("argument outside the domain of {function}: {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("integration did not converge on [{a}, {b}]: estimate {estimate:e}, error {error:e} after {evaluations} evaluations")]
    NonConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
