use thiserror::Error;

/// Errors raised by the numeric kernels and the sweep engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: domain error: {reason}")]
    Domain { op: &'static str, reason: String },

    /// A surface class violates the `g >= 2`, `n >= 0` hypothesis of the volume formulas.
    #[error("surface (g={g}, n={n}) rejected: {reason}")]
    Surface { g: i64, n: i64, reason: String },

    /// A sweep grid or spec is malformed.
    #[error("invalid sweep: {0}")]
    Sweep(String),

    /// A sweep cell failed; the offending `(g, n)` is identified.
    #[error("sweep cell (g={g}, n={n}) failed: {source}")]
    Cell {
        g: u32,
        n: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
