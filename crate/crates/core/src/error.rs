use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A point fell outside the cube plus its evaluation margin.
    #[error("point {point:?} lies outside the evaluation region of the cube")]
    Domain { point: Vec<f64> },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// An integrand returned NaN or an infinity.
    #[error("non-finite integrand value {value} at {point:?}")]
    Numeric { point: Vec<f64>, value: f64 },

    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("unknown corpus entry `{0}`")]
    UnknownEntry(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}
