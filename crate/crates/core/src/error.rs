use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Each variant has a stable machine-readable [`code`](Error::code) and a
/// distinct process [`exit_code`](Error::exit_code) used by the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-negativity violation in row {row}: {what}")]
    NonNegativityViolation { row: usize, what: String },

    #[error("dimension mismatch in row {row}: expected {expected} covariates, found {found}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dataset has no uncensored observations")]
    NoEvents,

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("time {t} outside [0, {t_final}]")]
    OutOfRange { t: f64, t_final: f64 },

    #[error("empty risk set at u = {u}")]
    EmptyRiskSet { u: f64 },

    #[error("singular design: V2 is rank deficient (collinear or constant covariates)")]
    SingularDesign,

    #[error("singular covariance: {0}")]
    SingularCovariance(String),

    #[error("improper posterior in interval {interval}: zero prior increment and no usable data")]
    ImproperPosterior { interval: usize },

    #[error("coverage must lie in (0, 1), got {0}")]
    InvalidCoverage(f64),

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{dropped} of {replicates} replicates failed (more than 1%): {last}")]
    TooManyDropped {
        dropped: usize,
        replicates: usize,
        last: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonNegativityViolation { .. } => "NonNegativityViolation",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NoEvents => "NoEvents",
            Error::DegenerateGrid(_) => "DegenerateGrid",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::EmptyRiskSet { .. } => "EmptyRiskSet",
            Error::SingularDesign => "SingularDesign",
            Error::SingularCovariance(_) => "SingularCovariance",
            Error::ImproperPosterior { .. } => "ImproperPosterior",
            Error::InvalidCoverage(_) => "InvalidCoverage",
            Error::InvalidPrior(_) => "InvalidPrior",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::TooManyDropped { .. } => "TooManyDropped",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    /// Process exit status for this error. Codes start at 10 so they never
    /// collide with 1 (generic failure) or 2 (usage error).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonNegativityViolation { .. } => 10,
            Error::DimensionMismatch { .. } => 11,
            Error::NoEvents => 12,
            Error::DegenerateGrid(_) => 13,
            Error::InvalidGrid(_) => 14,
            Error::OutOfRange { .. } => 15,
            Error::EmptyRiskSet { .. } => 16,
            Error::SingularDesign => 17,
            Error::SingularCovariance(_) => 18,
            Error::ImproperPosterior { .. } => 19,
            Error::InvalidCoverage(_) => 20,
            Error::InvalidPrior(_) => 21,
            Error::InvalidConfig(_) => 22,
            Error::TooManyDropped { .. } => 23,
            Error::Parse(_) => 24,
            Error::Io(_) => 25,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
            _ => Error::Parse(e.to_string()),
        }
    }
}
