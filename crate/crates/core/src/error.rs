use thiserror::Error;

/// Errors raised by the duality backends and the coderivative engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent must satisfy 1 < p < inf, got {0}")]
    Exponent(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },
    #[error("constraint violation: {0}")]
    Constraint(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("not in the positive cone: {0}")]
    NotPositive(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("combinatorial budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::Dimension { left, right })
    }
}

pub(crate) fn check_finite(values: &[f64], what: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(i) => Err(Error::Invalid(format!("{what}[{i}] is not finite"))),
    }
}
