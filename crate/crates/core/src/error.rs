use thiserror::Error;

/// Why a candidate mother wavelet was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inadmissibility {
    /// `ψ̂ψ̂†` carries non-scalar blades beyond tolerance.
    Scalarity,
    /// The `|ξ|⁻ⁿ`-weighted spectral energy keeps growing as the grid is
    /// refined around the origin.
    Divergent,
}

impl std::fmt::Display for Inadmissibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Inadmissibility::Scalarity => f.write_str("scalarity"),
            Inadmissibility::Divergent => f.write_str("divergent"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported dimension {0} (supported: 1, 2, 3)")]
    UnsupportedDimension(usize),

    #[error("sampling produced a non-finite value at node {node:?}")]
    Sampling { node: Vec<f64> },

    #[error("not admissible ({reason}): {detail}")]
    NotAdmissible {
        reason: Inadmissibility,
        detail: String,
    },

    #[error("spectral transform disagrees with direct oracle: deviation {deviation:.3e} > {tolerance:.3e}")]
    CalibrationFailure { deviation: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
