//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by scenario generation, numerics, and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or quadrature failed to converge. Carries the best estimate
    /// reached so callers can decide whether it is usable.
    #[error("numeric error: {msg} (partial estimate {partial:e})")]
    Numeric { msg: String, partial: f64 },

    /// Nearly-equal scale parameters where a closed form requires distinct ones.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Invalid experiment or scenario configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// The QoS constraints admit no assignment serving all cellular links.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Instance exceeds a solver's guarded size limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Operation not defined for this combination of inputs.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed argument (dimension mismatch, empty input, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 0 ok, 2 config, 3 infeasible, 4 capacity.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Argument(_) | Error::Unsupported(_) => 2,
            Error::Infeasible(_) => 3,
            Error::Capacity(_) => 4,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_match_interface_contract() {
        assert_eq!(Error::Config("x".into()).exit_code(), 2);
        assert_eq!(Error::Unsupported("x".into()).exit_code(), 2);
        assert_eq!(Error::Infeasible("x".into()).exit_code(), 3);
        assert_eq!(Error::Capacity("x".into()).exit_code(), 4);
        assert_eq!(Error::Numeric { msg: "x".into(), partial: 0.0 }.exit_code(), 1);
    }
}
