use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite drive value at t = {t:e} s")]
    NonFiniteDrive { t: f64 },

    #[error("{what} did not converge: achieved relative error {achieved:e} after {iterations} refinements")]
    NonConvergent {
        what: String,
        achieved: f64,
        iterations: usize,
    },

    #[error("invalid document: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
