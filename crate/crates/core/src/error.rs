use thiserror::Error;

/// Errors raised by the library. The CLI maps variants onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: unknown model or curve, bad scenario field, failed precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// A computation would exceed the configured operation budget.
    #[error("budget exceeded: {needed} operations requested, budget is {budget}")]
    Budget { needed: u128, budget: u128 },

    /// The structural hypotheses of the line-reduction volume argument are not met.
    #[error("reduction hypothesis not met: {0}")]
    ReductionRefused(String),

    /// The catalogue does not support a Zariski decomposition of the input.
    #[error("catalogue insufficient or D not pseudoeffective: {0}")]
    NotPseudoeffective(String),

    /// A claimed property (nefness, monotonicity) contradicts the computed data.
    #[error("internal consistency error: {0}")]
    Inconsistent(String),

    /// A generator was asked for a level it has not produced.
    #[error("level {requested} outside generated range (0..={available}); use a larger k")]
    OutOfRange { requested: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
