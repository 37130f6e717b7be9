use thiserror::Error;

/// Errors raised by geometric constructions and checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    /// An input lies outside the domain of an operation (off-sphere point,
    /// non-tangent vector, non-positive parameter, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A family parameter violates one of its admissibility inequalities.
    #[error("constraint violated: {constraint}")]
    Constraint { constraint: String },

    /// The immersion differential is rank deficient at the sample point.
    #[error("degenerate immersion at {point:?}: {reason}")]
    Degenerate { point: [f64; 3], reason: String },

    /// An iterative solver failed to reach its tolerance.
    #[error("no convergence: {what} (best residual {best_residual:e})")]
    NonConvergence { what: String, best_residual: f64 },

    #[error("unknown immersion id `{0}`")]
    UnknownImmersion(String),
}

impl GeomError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GeomError::Domain(msg.into())
    }

    pub(crate) fn constraint(msg: impl Into<String>) -> Self {
        GeomError::Constraint {
            constraint: msg.into(),
        }
    }
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
