//! Core algorithms for measuring the centralization of bipartite
//! user-community networks.
//!
//! The central object is the cumulative disruption curve: communities are
//! removed largest-first and each step records what fraction of the
//! surviving users' edges the removal severed. Its log-space area (DAUC)
//! summarizes how much a platform tends toward oligopoly. Around that sit
//! synthetic reference topologies, degree-preserving assortativity
//! rewiring, closed-form predictions for infinite random ensembles,
//! spectral Cheeger bounds, and a unipartite-to-bipartite conversion
//! pipeline.

pub mod analytic;
pub mod disruption;
mod dsu;
pub mod error;
pub mod generators;
pub mod graph;
pub mod rewiring;
pub mod spectral;
pub mod unipartite;

pub use analytic::{
    analytic_disruption, correlated_joint, correlation_experiment, extreme_joint, random_joint,
    sample_finite_network, size_class_disruption, truncated_binomial, u_n, zero_truncated,
    AnalyticPoint, CorrelationSetting, Coupling, JointDegreeModel, RelativeDifferencePoint,
    SizeClassPoint,
};
pub use disruption::{
    dauc, disruption_curve, giant_component_curve, local_cheeger_curve, population_curve,
    DisruptionCurve, DisruptionStep, GiantComponentPoint, LocalCheegerPoint, PopulationPoint,
};
pub use error::{Error, Result};
pub use generators::{
    bipartite_ba, bipartite_er, bipartite_small_world, near_star, powerlaw_config, GeneratorSpec,
    Topology, DEFAULT_EDGES_PER_USER,
};
pub use graph::{
    BipartiteGraph, CommunityIndex, Edge, EdgeRecord, RankingKey, RemovalPlan, UserIndex,
};
pub use rewiring::{
    projected_community_assortativities, rewire, rewiring_sweep, user_community_assortativity,
    Assortativity, RewireDirection, RewiringCheckpoint, RewiringTrace,
};
pub use spectral::{
    brute_force_cheeger, cheeger_bounds, lambda2, CheegerEstimate, Lambda2, BRUTE_FORCE_VERTEX_CAP,
};
pub use unipartite::{
    label_propagation, project_to_bipartite, LabelAssignment, UnipartiteGraph, UnipartiteRecord,
    DEFAULT_MAX_ROUNDS,
};
