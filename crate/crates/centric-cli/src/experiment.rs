//! Reproducible experiment runs: a config selects the input (edge list or
//! generator), the metric mode, and the replicate count; the report embeds
//! everything needed to regenerate it bit-for-bit.

use std::path::PathBuf;

use centric_core::{
    dauc, disruption_curve, BipartiteGraph, DisruptionCurve, GeneratorSpec, RankingKey, Topology,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::{ingest_edge_list, sig12};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn default_runs() -> usize {
    1
}

fn default_weighted() -> bool {
    true
}

/// Exactly one of `file` and `generator` must be set.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Topology>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub input: InputSource,
    #[serde(default)]
    pub ranking_key: RankingKey,
    #[serde(default = "default_weighted")]
    pub weighted: bool,
    /// Base seed; replicate `i` runs with `seed + i`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        match (&self.input.file, &self.input.generator) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "specify either an input file or a generator, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "an input file or a generator is required".into(),
            )),
            _ => {
                if self.runs < 1 {
                    return Err(CliError::Config("run count must be >= 1".into()));
                }
                if self.input.file.is_some() && self.runs > 1 {
                    return Err(CliError::Config(
                        "file inputs are deterministic; multiple runs need a generator".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Per-step aggregate over replicates. The half-width is the normal-
/// approximation 95% interval, `1.96 * sd / sqrt(runs)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggregatedStep {
    pub removed: usize,
    pub fraction_removed: f64,
    pub mean_disruption: f64,
    pub ci_half_width: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub ci_half_width: f64,
    pub per_run: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub tool_version: String,
    pub config: ExperimentConfig,
    pub seeds: Vec<u64>,
    pub runs: usize,
    pub communities: usize,
    pub steps: Vec<AggregatedStep>,
    pub dauc: Aggregate,
}

fn mean_and_half_width(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, 1.96 * variance.sqrt() / n.sqrt())
}

/// One deterministic replicate: generate (or load), rank, sweep.
pub fn single_run(
    config: &ExperimentConfig,
    seed: u64,
) -> Result<(BipartiteGraph, DisruptionCurve)> {
    let graph = match (&config.input.file, &config.input.generator) {
        (Some(path), None) => {
            let (graph, report) = ingest_edge_list(path)?;
            eprintln!(
                "ingested {} rows -> {} distinct edges ({} compressed), {} communities, {} users",
                report.rows,
                report.distinct_edges,
                report.duplicates_compressed,
                report.communities,
                report.users
            );
            graph
        }
        (None, Some(topology)) => GeneratorSpec {
            topology: topology.clone(),
            seed,
        }
        .generate()?,
        _ => unreachable!("validated config"),
    };
    let plan = graph.removal_plan(config.ranking_key);
    let curve = disruption_curve(&graph, &plan, config.weighted)?;
    Ok((graph, curve))
}

/// Runs the configured replicates (in parallel; each replicate is a pure
/// function of its seed) and aggregates disruption and DAUC with 95%
/// normal-approximation intervals. File inputs are a single deterministic
/// run. Replicates whose curves disagree in length abort the aggregation.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let seeds: Vec<u64> = (0..config.runs as u64).map(|i| config.seed + i).collect();

    let curves: Vec<DisruptionCurve> = seeds
        .par_iter()
        .map(|&seed| single_run(config, seed).map(|(_, curve)| curve))
        .collect::<Result<Vec<_>>>()?;

    let communities = curves[0].len();
    for (index, curve) in curves.iter().enumerate() {
        if curve.len() != communities {
            return Err(CliError::Core(
                centric_core::Error::ReplicateLengthMismatch {
                    index,
                    got: curve.len(),
                    expected: communities,
                },
            ));
        }
    }

    let mut steps = Vec::with_capacity(communities);
    for step_index in 0..communities {
        let values: Vec<f64> = curves
            .iter()
            .map(|curve| curve.steps()[step_index].disruption)
            .collect();
        let (mean, half_width) = mean_and_half_width(&values);
        steps.push(AggregatedStep {
            removed: step_index + 1,
            fraction_removed: sig12(curves[0].steps()[step_index].fraction_removed),
            mean_disruption: sig12(mean),
            ci_half_width: sig12(half_width),
        });
    }

    let dauc_values: Vec<f64> = curves
        .iter()
        .map(|curve| dauc(curve).map_err(CliError::Core))
        .collect::<Result<Vec<_>>>()?;
    let (dauc_mean, dauc_half_width) = mean_and_half_width(&dauc_values);

    Ok(ExperimentReport {
        tool_version: TOOL_VERSION.to_string(),
        config: config.clone(),
        seeds,
        runs: config.runs,
        communities,
        steps,
        dauc: Aggregate {
            mean: sig12(dauc_mean),
            ci_half_width: sig12(dauc_half_width),
            per_run: dauc_values.into_iter().map(sig12).collect(),
        },
    })
}
