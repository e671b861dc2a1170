use thiserror::Error;

/// Errors raised by the physical and signal-processing models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("unsupported layout: {0} access points (pass explicit coordinates instead)")]
    UnsupportedLayout(usize),

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    #[error("vector `{name}` is not unit length (norm {norm})")]
    NonUnitVector { name: &'static str, norm: f64 },

    #[error("channel matrix has no nonzero entry")]
    ZeroChannel,

    #[error("singular precoding system; use a positive regularization")]
    SingularSystem,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("power-split grid is empty")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
