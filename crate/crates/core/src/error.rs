use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("singular Cassini state: spin precession cancels node regression (denominator {0:e})")]
    SingularCassini(f64),

    #[error("non-finite derivative at t = {t} (component {index})")]
    NonFinite { t: f64, index: usize },

    #[error("Laplace table is stale: built for alpha = {built}, requested {requested}")]
    StaleTable { built: f64, requested: f64 },

    #[error("linear solver failure: {0}")]
    Solver(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
