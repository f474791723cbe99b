use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside its domain ({expected})")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("probability {0} is outside the open interval (0, 1)")]
    ProbabilityDomain(f64),
    #[error("numerical accuracy target {target:e} missed, achieved error estimate {estimate:e}")]
    NumericalAccuracy { estimate: f64, target: f64 },
    #[error("grid must be strictly increasing and finite")]
    InvalidGrid,
    #[error("need at least {needed} usable points, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("{0} is outside the classification scope")]
    OutOfScope(&'static str),
    #[error("query {query} lies outside the constraint hull [{lo}, {hi}]")]
    Extrapolation { query: f64, lo: f64, hi: f64 },
    #[error("support of the distribution is incompatible: {0}")]
    SupportMismatch(&'static str),
    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::ParameterDomain {
            name,
            value,
            expected,
        }
    }
}
