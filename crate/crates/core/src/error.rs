use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("edge {edge}: constraint [{lower}, {upper}] violates u- <= 0 <= u+, u- < u+")]
    InvalidConstraint { edge: usize, lower: f64, upper: f64 },

    #[error("constraints are not in a compatible orientation (edge {edge} has u+ = 0)")]
    NotCanonical { edge: usize },

    #[error("invalid value for `{field}`: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("state diverged at t = {time}")]
    Divergence { time: f64 },

    #[error("graph is not strongly connected")]
    NotStronglyConnected,

    #[error("{what} exceeds limit {limit} (found {found})")]
    TooLarge {
        what: &'static str,
        limit: usize,
        found: usize,
    },

    #[error("matching condition infeasible (residual {residual:e})")]
    MatchingInfeasible { residual: f64 },

    #[error("cycle cover is not certified minimal")]
    UncertifiedCover,
}

impl Error {
    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidField {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                what,
                expected,
                found,
            })
        }
    }
}
