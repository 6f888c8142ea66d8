use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building spectra, overlaps or
/// density matrices.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{quantity} out of domain: {value}")]
    Domain { quantity: &'static str, value: f64 },

    #[error("coherence factors are singular at xi = delta = 0")]
    SingularPoint,

    #[error("{what} did not converge: {coarse} (coarse) vs {fine} (refined)")]
    Convergence {
        what: &'static str,
        coarse: f64,
        fine: f64,
    },

    #[error("at t = {t}, d = {d}: {source}")]
    AtGridPoint {
        t: f64,
        d: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("at t = {t}, enhancement = {enhancement}: {source}")]
    AtSweepPoint {
        t: f64,
        enhancement: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("no pair in the basis satisfies l1 + l2 = {winding}")]
    EmptySector { winding: i32 },

    #[error("total emission rate is zero; mixture is undefined")]
    DegenerateMixture,

    #[error("trace must be positive, got {0}")]
    NonPositiveTrace(f64),

    #[error("trace must be 1 within 1e-9, got {0}")]
    TraceNotUnit(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("matrix dimension mismatch: {0}")]
    Shape(String),

    #[error("state and density matrix live on different bases")]
    BasisMismatch,

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn at_grid_point(self, t: f64, d: f64) -> Self {
        Error::AtGridPoint {
            t,
            d,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_sweep_point(self, t: f64, enhancement: f64) -> Self {
        Error::AtSweepPoint {
            t,
            enhancement,
            source: Box::new(self),
        }
    }

    /// Innermost error, with grid/sweep coordinates stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtGridPoint { source, .. } | Error::AtSweepPoint { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_convergence(&self) -> bool {
        matches!(self.root(), Error::Convergence { .. })
    }
}
