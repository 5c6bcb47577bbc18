use thiserror::Error;

use crate::scaling::ScalingOutcome;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed hypergraph object: bad edge, bad vertex set, mismatched specs.
    #[error("structural error: {0}")]
    Structural(String),

    /// A numeric parameter outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("positivity error: edge {index} has weight {value}, expected > 0")]
    Positivity { index: usize, value: f64 },

    /// A configured work or size budget would be exceeded.
    #[error("capacity exceeded: {what} (limit {limit})")]
    Capacity { what: String, limit: u64 },

    /// The scaling iteration stopped without reaching the tolerance. Carries
    /// the iterate with the smallest residual seen.
    #[error(
        "scaling did not converge: residual {} after {} sweeps",
        .best.residual,
        .best.iterations
    )]
    NonConvergence { best: Box<ScalingOutcome> },

    /// An operation received an object in the wrong state.
    #[error("state error: {0}")]
    State(String),

    #[error("parse error at {locus}: {message}")]
    Parse { locus: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, limit: u64) -> Self {
        Error::Capacity { what: what.into(), limit }
    }

    pub(crate) fn parse(locus: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { locus: locus.into(), message: message.into() }
    }
}
