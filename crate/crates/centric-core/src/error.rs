use thiserror::Error;

/// Errors produced by graph construction and the metric pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge list is empty")]
    EmptyGraph,

    #[error("record {position}: weight {weight} is invalid, weights must be >= 1")]
    InvalidWeight { position: usize, weight: i64 },

    #[error("record {position}: empty {field} identifier")]
    EmptyIdentifier {
        position: usize,
        field: &'static str,
    },

    #[error("record {position}: self-loop on node `{node}`")]
    SelfLoop { position: usize, node: String },

    #[error("removal plan does not match graph: {reason}")]
    PlanMismatch { reason: String },

    #[error("disruption curve has no steps")]
    EmptyCurve,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("degree {0} is outside the model support")]
    OutsideSupport(usize),

    #[error("stub matching infeasible: {unmatched} of {total} stubs could not be wired")]
    InfeasibleMatching { unmatched: usize, total: usize },

    #[error("graph has {vertices} vertices, exceeding the brute-force cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },

    #[error(
        "eigensolver stalled after {iterations} iterations: residual {residual:.3e} > tolerance {tolerance:.3e}"
    )]
    NoConvergence {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("label assignment covers {labels} nodes but the graph has {nodes}")]
    LabelMismatch { labels: usize, nodes: usize },

    #[error("replicate {index} produced {got} curve steps, expected {expected}")]
    ReplicateLengthMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
