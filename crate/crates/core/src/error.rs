use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is outside the admissible range ({expected})")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        expected: String,
    },

    #[error("{what} = {value} exceeds the sieve limit {limit}")]
    BeyondSieveLimit {
        what: &'static str,
        value: f64,
        limit: u64,
    },

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} intervals")]
    QuadratureNotConverged {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("table construction did not converge on [{lo}, {hi}] (estimated error {error:e})")]
    TableNotConverged { lo: f64, hi: f64, error: f64 },

    #[error("no sign change of {function} on [{lo}, {hi}]")]
    NoSignChange {
        function: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("Legendre recursion depth {depth} exceeded the limit {limit}")]
    RecursionDepthExceeded { depth: usize, limit: usize },

    #[error("Legendre recursion visited more than {limit} nodes")]
    WorkBudgetExceeded { limit: u64 },

    #[error("supremum of {quantity} is not monotone on its tail (last increase at t = {at:e})")]
    NonMonotoneTail { quantity: &'static str, at: f64 },

    #[error("fixed-point iteration did not stabilise within {iterations} steps")]
    FixpointNotReached { iterations: usize },

    #[error("invalid cache file: {0}")]
    Cache(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("counting paths disagree at x={x}, y={y}: {first} vs {second}")]
    PathMismatch { x: f64, y: f64, first: u64, second: u64 },

    #[error("at x={x}, y={y}: {source}")]
    AtPoint {
        x: f64,
        y: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: impl Into<String>) -> Self {
        Error::OutOfDomain {
            name,
            value,
            expected: expected.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Cache(e.to_string())
    }
}
