use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    Header { path: PathBuf, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] centric_core::Error),

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    /// Stable machine-readable error kind for the JSON error object.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Format { .. } => "format",
            CliError::Header { .. } => "format",
            CliError::Config(_) => "config",
            CliError::Json { .. } => "json",
            CliError::Core(source) => match source {
                centric_core::Error::EmptyGraph => "empty_graph",
                centric_core::Error::InvalidWeight { .. } => "invalid_weight",
                centric_core::Error::EmptyIdentifier { .. } => "empty_identifier",
                centric_core::Error::SelfLoop { .. } => "self_loop",
                centric_core::Error::PlanMismatch { .. } => "plan_mismatch",
                centric_core::Error::EmptyCurve => "empty_curve",
                centric_core::Error::InvalidParameter(_) => "invalid_parameter",
                centric_core::Error::InvalidDistribution(_) => "invalid_distribution",
                centric_core::Error::OutsideSupport(_) => "outside_support",
                centric_core::Error::InfeasibleMatching { .. } => "infeasible_matching",
                centric_core::Error::TooLarge { .. } => "too_large",
                centric_core::Error::NoConvergence { .. } => "no_convergence",
                centric_core::Error::LabelMismatch { .. } => "label_mismatch",
                centric_core::Error::ReplicateLengthMismatch { .. } => "replicate_mismatch",
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
