use thiserror::Error;

/// Errors raised by the simulation kernel and the state/measure layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid subsystem: {0}")]
    InvalidSubsystem(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("value {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(value: f64, lo: f64, hi: f64, domain: &'static str) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::Domain { value, domain })
    }
}
