use std::path::PathBuf;

/// Errors raised across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("target {target} is below the range of the growth function (M(0) = {m0})")]
    BelowRange { target: f64, m0: f64 },

    #[error("no preimage of {target} found before the bracket reached {cap}")]
    UnboundedSearch { target: f64, cap: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("divergent or uncertified tail: {0}")]
    DivergentTail(String),

    #[error("empty grid: {0}")]
    EmptyGrid(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("grid alignment: {0}")]
    Alignment(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
