use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("efficiency function is undefined for negative SIR {0}")]
    NegativeSir(f64),

    #[error("no sign change of the target function on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error(
        "{users} co-channel users cannot all reach SIR {gamma_star} with processing gain {processing_gain}"
    )]
    Infeasible {
        users: usize,
        processing_gain: f64,
        gamma_star: f64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{count} candidate assignments exceed the enumeration limit of {limit}")]
    TooManyAssignments { count: String, limit: u64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
