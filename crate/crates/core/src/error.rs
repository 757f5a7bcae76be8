use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Each variant has a stable [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rational `{0}`")]
    InvalidRational(String),

    #[error("invalid brane: {0}")]
    InvalidBrane(String),

    #[error("parallel lines: r1*d2 = r2*d1 = {0}, the branes do not intersect transversally")]
    ParallelLines(i64),

    #[error("unsupported orientation: r1*d2 = {lhs} < r2*d1 = {rhs}; swap the branes")]
    UnsupportedOrientation { lhs: i64, rhs: i64 },

    #[error("invalid surgery point selection: {0}")]
    InvalidPointSelection(String),

    #[error("surgery result is disconnected ({0} components)")]
    DisconnectedResult(usize),

    #[error("mismatched degree: {0} vs {1}")]
    MismatchedDegree(i64, i64),

    #[error("unsupported classification: {0}")]
    UnsupportedClassification(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no lift: cover degree {m} does not divide rank {r}")]
    NoLift { m: u32, r: u32 },

    #[error("mismatched class: (r, d) = ({0}, {1}) vs ({2}, {3})")]
    MismatchedClass(u32, i64, u32, i64),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidRational(_) => "E_RATIONAL",
            Error::InvalidBrane(_) => "E_BRANE",
            Error::ParallelLines(_) => "E_PARALLEL",
            Error::UnsupportedOrientation { .. } => "E_ORIENTATION",
            Error::InvalidPointSelection(_) => "E_POINTS",
            Error::DisconnectedResult(_) => "E_DISCONNECTED",
            Error::MismatchedDegree(..) => "E_DEGREE",
            Error::UnsupportedClassification(_) => "E_CLASSIFICATION",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::NoLift { .. } => "E_NO_LIFT",
            Error::MismatchedClass(..) => "E_CLASS",
        }
    }

    /// Whether the error comes from malformed input rather than a domain precondition.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::InvalidRational(_) | Error::InvalidBrane(_))
    }
}
