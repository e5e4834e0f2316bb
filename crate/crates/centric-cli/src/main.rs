//! `centric`: disruption-curve centralization analysis for bipartite
//! user-community networks.

mod error;
mod experiment;
mod io;
mod model;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use centric_core::{
    analytic_disruption, cheeger_bounds, correlated_joint, correlation_experiment, dauc,
    giant_component_curve, label_propagation, local_cheeger_curve, population_curve,
    project_to_bipartite, random_joint, rewire, rewiring_sweep, sample_finite_network,
    CorrelationSetting, Coupling, RankingKey, RewireDirection, RewiringTrace, Topology,
    DEFAULT_EDGES_PER_USER, DEFAULT_MAX_ROUNDS,
};

use error::{CliError, Result};
use experiment::{ExperimentConfig, InputSource, OutputFormat, TOOL_VERSION};
use io::{cell, resolve_output, sig12, write_csv, write_json};

#[derive(Parser)]
#[command(
    name = "centric",
    version,
    about = "Quantify the centralization of bipartite user-community networks",
    long_about = "Measures how much a platform depends on its largest communities by \
                  cumulatively removing them and tracking the damage to surviving users. \
                  Includes synthetic generators, assortativity rewiring, closed-form \
                  ensemble predictions, and spectral bottleneck bounds."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cumulative disruption curve, optionally averaged over seeded runs
    Disrupt(DisruptArgs),
    /// Log-space area under the disruption curve
    Dauc(DaucArgs),
    /// Cumulative population share as smaller communities are included
    Population(SingleGraphArgs),
    /// Giant-component size under cumulative community removal
    Giant(SingleGraphArgs),
    /// Cheeger bottleneck measures: spectral bounds or the local curve
    Cheeger(CheegerArgs),
    /// Generate a synthetic bipartite network as an edge list
    Generate(GenerateArgs),
    /// Degree-preserving rewiring toward higher or lower assortativity
    Rewire(RewireArgs),
    /// Closed-form disruption for random bipartite ensembles
    Analytic(AnalyticArgs),
    /// Convert a unipartite edge list to bipartite user-community form
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TopologyKind {
    NearStar,
    BipartiteBa,
    PowerlawConfig,
    BipartiteEr,
    BipartiteSmallWorld,
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Bipartite edge-list CSV with header `user,community[,weight]`
    #[arg(long, value_name = "FILE", conflicts_with = "topology")]
    input: Option<PathBuf>,

    /// Synthetic topology to generate instead of reading a file
    #[arg(long, value_enum)]
    topology: Option<TopologyKind>,

    /// Number of communities (near-star, bipartite-ba, powerlaw-config, bipartite-er)
    #[arg(long)]
    communities: Option<usize>,

    /// Size of the user pool
    #[arg(long)]
    users: Option<usize>,

    /// Power-law exponent (powerlaw-config)
    #[arg(long)]
    gamma: Option<f64>,

    /// Edge probability (bipartite-er)
    #[arg(long)]
    edge_probability: Option<f64>,

    /// Distinct communities per arriving user (bipartite-ba)
    #[arg(long)]
    edges_per_user: Option<usize>,

    /// Ring size (bipartite-small-world)
    #[arg(long)]
    nodes: Option<usize>,

    /// Ring neighborhood size (bipartite-small-world)
    #[arg(long)]
    neighbors: Option<usize>,

    /// Ring rewiring probability (bipartite-small-world)
    #[arg(long)]
    rewiring_probability: Option<f64>,
}

impl SourceArgs {
    fn topology(&self) -> Result<Topology> {
        let kind = self
            .topology
            .ok_or_else(|| CliError::Config("an input file or --topology is required".into()))?;
        let need = |value: Option<usize>, flag: &str| {
            value.ok_or_else(|| CliError::Config(format!("--{flag} is required for {kind:?}")))
        };
        let need_f = |value: Option<f64>, flag: &str| {
            value.ok_or_else(|| CliError::Config(format!("--{flag} is required for {kind:?}")))
        };
        Ok(match kind {
            TopologyKind::NearStar => Topology::NearStar {
                communities: need(self.communities, "communities")?,
                users: need(self.users, "users")?,
            },
            TopologyKind::BipartiteBa => Topology::BipartiteBa {
                communities: need(self.communities, "communities")?,
                users: need(self.users, "users")?,
                edges_per_user: self.edges_per_user.unwrap_or(DEFAULT_EDGES_PER_USER),
            },
            TopologyKind::PowerlawConfig => Topology::PowerlawConfig {
                communities: need(self.communities, "communities")?,
                users: need(self.users, "users")?,
                gamma: need_f(self.gamma, "gamma")?,
            },
            TopologyKind::BipartiteEr => Topology::BipartiteEr {
                communities: need(self.communities, "communities")?,
                users: need(self.users, "users")?,
                edge_probability: need_f(self.edge_probability, "edge-probability")?,
            },
            TopologyKind::BipartiteSmallWorld => Topology::BipartiteSmallWorld {
                nodes: need(self.nodes, "nodes")?,
                neighbors: need(self.neighbors, "neighbors")?,
                rewiring_probability: need_f(self.rewiring_probability, "rewiring-probability")?,
            },
        })
    }

    fn input_source(&self) -> Result<InputSource> {
        match &self.input {
            Some(path) => Ok(InputSource {
                file: Some(path.clone()),
                generator: None,
            }),
            None => Ok(InputSource {
                file: None,
                generator: Some(self.topology()?),
            }),
        }
    }
}

#[derive(Args, Debug)]
struct MetricFlags {
    /// Community ranking key for the removal order
    #[arg(long, value_enum, default_value_t = RankBy::Users)]
    rank_by: RankBy,

    /// Use weighted degrees (the default)
    #[arg(long, overrides_with = "unweighted")]
    weighted: bool,

    /// Use distinct-edge counts instead of weight sums
    #[arg(long)]
    unweighted: bool,
}

impl MetricFlags {
    fn weighted(&self) -> bool {
        !self.unweighted
    }

    fn ranking_key(&self) -> RankingKey {
        match self.rank_by {
            RankBy::Users => RankingKey::UniqueUsers,
            RankBy::Weight => RankingKey::WeightedDegree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RankBy {
    /// Distinct user count (default)
    Users,
    /// Weighted degree
    Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(format: Format) -> Self {
        match format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output path; relative paths resolve under $CENTRIC_OUTPUT_DIR,
    /// omit for stdout
    #[arg(long, short)]
    output: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct DisruptArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    metric: MetricFlags,
    #[command(flatten)]
    output: OutputArgs,

    /// Base seed for generator inputs; replicate i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Seeded replicates to aggregate (generator inputs only)
    #[arg(long, default_value_t = 1)]
    runs: usize,

    /// JSON experiment config; replaces all other flags
    #[arg(long, conflicts_with_all = ["input", "topology", "seed", "runs", "output", "format"])]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DaucArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    metric: MetricFlags,
    #[command(flatten)]
    output: OutputArgs,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = 1)]
    runs: usize,

    /// Previously exported curve CSV (`k,fraction_removed,disruption`)
    #[arg(long, conflicts_with_all = ["input", "topology"])]
    curve: Option<PathBuf>,

    #[arg(long, conflicts_with_all = ["input", "topology", "curve", "seed", "runs", "output", "format"])]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SingleGraphArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    metric: MetricFlags,
    #[command(flatten)]
    output: OutputArgs,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CheegerArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    metric: MetricFlags,
    #[command(flatten)]
    output: OutputArgs,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Emit the per-step local Cheeger curve instead of global bounds
    #[arg(long)]
    local: bool,

    /// Eigensolver relative residual target
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    output: OutputArgs,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RewireArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    output: OutputArgs,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Direction to move the user-community degree correlation
    #[arg(long, value_enum)]
    direction: Direction,

    /// Comma-separated ascending target fractions of accepted swaps,
    /// e.g. 0.1,0.2,0.5
    #[arg(long, default_value = "")]
    fractions: String,

    /// Also export the rewired edge list at the final fraction
    #[arg(long, value_name = "FILE")]
    export_graph: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Increase,
    Decrease,
}

impl From<Direction> for RewireDirection {
    fn from(direction: Direction) -> Self {
        match direction {
            Direction::Increase => RewireDirection::Increase,
            Direction::Decrease => RewireDirection::Decrease,
        }
    }
}

#[derive(Args, Debug)]
struct AnalyticArgs {
    /// Model JSON: {"p_n": [[size, prob], ...], "g_m": [[memberships, prob], ...]}
    #[arg(long, value_name = "FILE")]
    model: PathBuf,

    #[command(flatten)]
    output: OutputArgs,

    /// Interpolation strength toward an extremal coupling
    #[arg(long)]
    rho: Option<f64>,

    /// Extremal coupling direction (required with --rho)
    #[arg(long, value_enum, requires = "rho")]
    direction: Option<ExtremeDirection>,

    /// Sample a finite network of this many communities instead of
    /// evaluating the closed form
    #[arg(long, value_name = "COMMUNITIES")]
    sample: Option<usize>,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtremeDirection {
    Max,
    Min,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    /// Unipartite edge-list CSV with header `source,target[,weight]`
    #[arg(long, value_name = "FILE")]
    input: PathBuf,

    #[command(flatten)]
    output: OutputArgs,

    /// Seed for label-propagation visit order and tie breaking
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Label-propagation round cap
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    max_rounds: usize,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool_version: &'static str,
    config: ExperimentConfig,
    seeds: Vec<u64>,
    result: T,
}

fn single_graph_config(
    source: &SourceArgs,
    metric: &MetricFlags,
    seed: u64,
) -> Result<ExperimentConfig> {
    let config = ExperimentConfig {
        input: source.input_source()?,
        ranking_key: metric.ranking_key(),
        weighted: metric.weighted(),
        seed,
        runs: 1,
        output: None,
        format: OutputFormat::Csv,
    };
    config.validate()?;
    Ok(config)
}

fn load_graph(config: &ExperimentConfig) -> Result<centric_core::BipartiteGraph> {
    match (&config.input.file, &config.input.generator) {
        (Some(path), None) => {
            let (graph, report) = io::ingest_edge_list(path)?;
            eprintln!(
                "ingested {} rows -> {} distinct edges ({} compressed), {} communities, {} users",
                report.rows,
                report.distinct_edges,
                report.duplicates_compressed,
                report.communities,
                report.users
            );
            Ok(graph)
        }
        (None, Some(topology)) => Ok(centric_core::GeneratorSpec {
            topology: topology.clone(),
            seed: config.seed,
        }
        .generate()?),
        _ => unreachable!("validated config"),
    }
}

fn run_disrupt(args: &DisruptArgs) -> Result<()> {
    let (config, target, format) = match &args.config {
        Some(path) => {
            let raw = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let config: ExperimentConfig =
                serde_json::from_str(&raw).map_err(|source| CliError::Json {
                    path: path.clone(),
                    source,
                })?;
            let target = resolve_output(config.output.as_deref());
            let format = config.format;
            (config, target, format)
        }
        None => {
            let config = ExperimentConfig {
                input: args.source.input_source()?,
                ranking_key: args.metric.ranking_key(),
                weighted: args.metric.weighted(),
                seed: args.seed,
                runs: args.runs,
                output: args.output.output.clone(),
                format: args.output.format.into(),
            };
            let target = resolve_output(args.output.output.as_deref());
            (config, target, args.output.format.into())
        }
    };

    let report = experiment::run_experiment(&config)?;
    match format {
        OutputFormat::Json => write_json(&target, &report)?,
        OutputFormat::Csv if report.runs == 1 => {
            let rows: Vec<Vec<String>> = report
                .steps
                .iter()
                .map(|step| {
                    vec![
                        step.removed.to_string(),
                        cell(step.fraction_removed),
                        cell(step.mean_disruption),
                    ]
                })
                .collect();
            write_csv(&target, &["k", "fraction_removed", "disruption"], &rows)?;
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = report
                .steps
                .iter()
                .map(|step| {
                    vec![
                        step.removed.to_string(),
                        cell(step.fraction_removed),
                        cell(step.mean_disruption),
                        cell(step.ci_half_width),
                    ]
                })
                .collect();
            write_csv(
                &target,
                &["k", "fraction_removed", "mean_disruption", "ci_half_width"],
                &rows,
            )?;
        }
    }
    Ok(())
}

fn run_dauc(args: &DaucArgs) -> Result<()> {
    if let Some(curve_path) = &args.curve {
        let curve = io::load_curve(curve_path)?;
        let value = sig12(dauc(&curve)?);
        let target = resolve_output(args.output.output.as_deref());
        return match args.output.format {
            Format::Json => {
                #[derive(Serialize)]
                struct CurveDauc {
                    tool_version: &'static str,
                    curve: PathBuf,
                    dauc: f64,
                }
                write_json(
                    &target,
                    &CurveDauc {
                        tool_version: TOOL_VERSION,
                        curve: curve_path.clone(),
                        dauc: value,
                    },
                )
            }
            Format::Csv => write_csv(&target, &["dauc"], &[vec![cell(value)]]),
        };
    }

    let (config, target, format) = match &args.config {
        Some(path) => {
            let raw = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let config: ExperimentConfig =
                serde_json::from_str(&raw).map_err(|source| CliError::Json {
                    path: path.clone(),
                    source,
                })?;
            let target = resolve_output(config.output.as_deref());
            let format = config.format;
            (config, target, format)
        }
        None => {
            let config = ExperimentConfig {
                input: args.source.input_source()?,
                ranking_key: args.metric.ranking_key(),
                weighted: args.metric.weighted(),
                seed: args.seed,
                runs: args.runs,
                output: args.output.output.clone(),
                format: args.output.format.into(),
            };
            let target = resolve_output(args.output.output.as_deref());
            (config, target, args.output.format.into())
        }
    };

    let report = experiment::run_experiment(&config)?;
    match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct DaucReport {
                tool_version: String,
                config: ExperimentConfig,
                seeds: Vec<u64>,
                dauc: experiment::Aggregate,
            }
            write_json(
                &target,
                &DaucReport {
                    tool_version: report.tool_version,
                    config: report.config,
                    seeds: report.seeds,
                    dauc: report.dauc,
                },
            )
        }
        OutputFormat::Csv => write_csv(
            &target,
            &["mean_dauc", "ci_half_width"],
            &[vec![
                cell(report.dauc.mean),
                cell(report.dauc.ci_half_width),
            ]],
        ),
    }
}

fn run_population(args: &SingleGraphArgs) -> Result<()> {
    let config = single_graph_config(&args.source, &args.metric, args.seed)?;
    let graph = load_graph(&config)?;
    let plan = graph.removal_plan(config.ranking_key);
    let points = population_curve(&graph, &plan)?;
    let target = resolve_output(args.output.output.as_deref());
    match args.output.format {
        Format::Json => {
            let rounded: Vec<(f64, f64)> = points
                .iter()
                .map(|p| (sig12(p.fraction_included), sig12(p.cumulative_fraction)))
                .collect();
            write_json(
                &target,
                &Envelope {
                    tool_version: TOOL_VERSION,
                    seeds: vec![config.seed],
                    config,
                    result: rounded,
                },
            )
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|p| vec![cell(p.fraction_included), cell(p.cumulative_fraction)])
                .collect();
            write_csv(
                &target,
                &["fraction_included", "cumulative_fraction"],
                &rows,
            )
        }
    }
}

fn run_giant(args: &SingleGraphArgs) -> Result<()> {
    let config = single_graph_config(&args.source, &args.metric, args.seed)?;
    let graph = load_graph(&config)?;
    let plan = graph.removal_plan(config.ranking_key);
    let points = giant_component_curve(&graph, &plan)?;
    let target = resolve_output(args.output.output.as_deref());
    match args.output.format {
        Format::Json => {
            let rounded: Vec<(usize, f64)> = points
                .iter()
                .map(|p| (p.removed, sig12(p.fraction)))
                .collect();
            write_json(
                &target,
                &Envelope {
                    tool_version: TOOL_VERSION,
                    seeds: vec![config.seed],
                    config,
                    result: rounded,
                },
            )
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|p| vec![p.removed.to_string(), cell(p.fraction)])
                .collect();
            write_csv(&target, &["k", "fraction"], &rows)
        }
    }
}

fn run_cheeger(args: &CheegerArgs) -> Result<()> {
    let config = single_graph_config(&args.source, &args.metric, args.seed)?;
    let graph = load_graph(&config)?;
    let target = resolve_output(args.output.output.as_deref());

    if args.local {
        let plan = graph.removal_plan(config.ranking_key);
        let points = local_cheeger_curve(&graph, &plan, config.weighted)?;
        return match args.output.format {
            Format::Json => {
                let rounded: Vec<(usize, f64)> =
                    points.iter().map(|p| (p.removed, sig12(p.value))).collect();
                write_json(
                    &target,
                    &Envelope {
                        tool_version: TOOL_VERSION,
                        seeds: vec![config.seed],
                        config,
                        result: rounded,
                    },
                )
            }
            Format::Csv => {
                let rows: Vec<Vec<String>> = points
                    .iter()
                    .map(|p| vec![p.removed.to_string(), cell(p.value)])
                    .collect();
                write_csv(&target, &["k", "value"], &rows)
            }
        };
    }

    let estimate = cheeger_bounds(&graph, args.tolerance, config.weighted)?;
    if estimate.restricted_to_giant {
        eprintln!("warning: graph is disconnected; spectrum computed on the largest component");
    }
    #[derive(Serialize)]
    struct Bounds {
        lambda2: f64,
        lower: f64,
        upper: f64,
        exact: Option<f64>,
        restricted_to_giant: bool,
    }
    let bounds = Bounds {
        lambda2: sig12(estimate.lambda2),
        lower: sig12(estimate.lower),
        upper: sig12(estimate.upper),
        exact: estimate.exact.map(sig12),
        restricted_to_giant: estimate.restricted_to_giant,
    };
    match args.output.format {
        Format::Json => write_json(
            &target,
            &Envelope {
                tool_version: TOOL_VERSION,
                seeds: vec![config.seed],
                config,
                result: bounds,
            },
        ),
        Format::Csv => write_csv(
            &target,
            &["lambda2", "lower", "upper", "exact"],
            &[vec![
                cell(bounds.lambda2),
                cell(bounds.lower),
                cell(bounds.upper),
                bounds.exact.map(cell).unwrap_or_default(),
            ]],
        ),
    }
}

fn run_generate(args: &GenerateArgs) -> Result<()> {
    let topology = args.source.topology()?;
    let graph = centric_core::GeneratorSpec {
        topology,
        seed: args.seed,
    }
    .generate()?;
    if graph.num_communities() == 1 {
        eprintln!("warning: generated graph collapsed to a single community");
    }
    let target = resolve_output(args.output.output.as_deref());
    io::export_edge_list(&target, &graph)
}

fn trace_rows(trace: &RewiringTrace) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for checkpoint in &trace.checkpoints {
        let assort = |value: centric_core::Assortativity| {
            if value.defined {
                cell(value.value)
            } else {
                String::new()
            }
        };
        let mut push = |metric: &str, value: String| {
            rows.push(vec![
                cell(checkpoint.target_fraction),
                cell(checkpoint.achieved_fraction),
                metric.to_string(),
                value,
            ]);
        };
        push("accepted_swaps", checkpoint.accepted_swaps.to_string());
        push(
            "user_community_assortativity",
            assort(checkpoint.user_community_assortativity),
        );
        push(
            "projected_degree_assortativity",
            assort(checkpoint.projected_degree_assortativity),
        );
        push(
            "projected_population_assortativity",
            assort(checkpoint.projected_population_assortativity),
        );
        push("dauc", cell(checkpoint.dauc));
    }
    rows
}

fn parse_fractions(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .filter(|piece| !piece.trim().is_empty())
        .map(|piece| {
            piece
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("`{piece}` is not a valid fraction")))
        })
        .collect()
}

fn run_rewire(args: &RewireArgs) -> Result<()> {
    let fractions = parse_fractions(&args.fractions)?;
    let config = ExperimentConfig {
        input: args.source.input_source()?,
        ranking_key: RankingKey::UniqueUsers,
        weighted: true,
        seed: args.seed,
        runs: 1,
        output: None,
        format: OutputFormat::Csv,
    };
    config.validate()?;
    let graph = load_graph(&config)?;
    let direction: RewireDirection = args.direction.into();

    let trace = rewiring_sweep(&graph, direction, &fractions, args.seed)?;
    if !trace.completed {
        eprintln!("warning: edge supply exhausted; trace is partial");
    }

    if let Some(path) = &args.export_graph {
        let last = fractions
            .last()
            .copied()
            .ok_or_else(|| CliError::Config("at least one fraction is required".into()))?;
        // same seed, same swap sequence: the final graph matches the sweep
        let (rewired, _) = rewire(&graph, direction, last, args.seed)?;
        io::export_edge_list(&resolve_output(Some(path)), &rewired)?;
    }

    let target = resolve_output(args.output.output.as_deref());
    match args.output.format {
        Format::Json => write_json(
            &target,
            &Envelope {
                tool_version: TOOL_VERSION,
                seeds: vec![args.seed],
                config,
                result: &trace,
            },
        ),
        Format::Csv => write_csv(
            &target,
            &["target_fraction", "achieved_fraction", "metric", "value"],
            &trace_rows(&trace),
        ),
    }
}

fn run_analytic(args: &AnalyticArgs) -> Result<()> {
    let spec = model::ModelSpec::load(&args.model)?;
    let p_n = spec.dense_p_n();
    let g_m = spec.dense_g_m();
    let target = resolve_output(args.output.output.as_deref());

    #[derive(Serialize)]
    struct AnalyticEnvelope<T: Serialize> {
        tool_version: &'static str,
        model: model::ModelSpec,
        rho: Option<f64>,
        direction: Option<String>,
        seed: u64,
        result: T,
    }

    if let Some(communities) = args.sample {
        // sampling honors the coupling interpolation when one is requested
        let model = match (args.rho, args.direction) {
            (None, _) => random_joint(&p_n, &g_m)?,
            (Some(rho), Some(direction)) => {
                let direction = match direction {
                    ExtremeDirection::Max => Coupling::TowardMax,
                    ExtremeDirection::Min => Coupling::TowardMin,
                };
                correlated_joint(&p_n, &g_m, CorrelationSetting { rho, direction })?
            }
            (Some(_), None) => {
                return Err(CliError::Config(
                    "--direction {max,min} is required with --rho".into(),
                ))
            }
        };
        let graph = sample_finite_network(&model, communities, args.seed)?;
        return io::export_edge_list(&target, &graph);
    }

    match args.rho {
        None => {
            let model = random_joint(&p_n, &g_m)?;
            let points = analytic_disruption(&model)?;
            match args.output.format {
                Format::Json => {
                    let rounded: Vec<(usize, f64, bool)> = points
                        .iter()
                        .map(|p| (p.size, sig12(p.disruption), p.denominator_zero))
                        .collect();
                    write_json(
                        &target,
                        &AnalyticEnvelope {
                            tool_version: TOOL_VERSION,
                            model: spec,
                            rho: None,
                            direction: None,
                            seed: args.seed,
                            result: rounded,
                        },
                    )
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = points
                        .iter()
                        .map(|p| {
                            vec![
                                p.size.to_string(),
                                cell(p.disruption),
                                p.denominator_zero.to_string(),
                            ]
                        })
                        .collect();
                    write_csv(&target, &["size", "disruption", "denominator_zero"], &rows)
                }
            }
        }
        Some(rho) => {
            let direction = match args.direction {
                Some(ExtremeDirection::Max) => Coupling::TowardMax,
                Some(ExtremeDirection::Min) => Coupling::TowardMin,
                None => {
                    return Err(CliError::Config(
                        "--direction {max,min} is required with --rho".into(),
                    ))
                }
            };
            let points = correlation_experiment(&p_n, &g_m, CorrelationSetting { rho, direction })?;
            match args.output.format {
                Format::Json => {
                    let rounded: Vec<(usize, f64, bool)> = points
                        .iter()
                        .map(|p| (p.size, sig12(p.relative_difference), p.defined))
                        .collect();
                    write_json(
                        &target,
                        &AnalyticEnvelope {
                            tool_version: TOOL_VERSION,
                            model: spec,
                            rho: Some(rho),
                            direction: Some(format!("{direction:?}")),
                            seed: args.seed,
                            result: rounded,
                        },
                    )
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = points
                        .iter()
                        .map(|p| {
                            vec![
                                p.size.to_string(),
                                cell(p.relative_difference),
                                p.defined.to_string(),
                            ]
                        })
                        .collect();
                    write_csv(&target, &["size", "relative_difference", "defined"], &rows)
                }
            }
        }
    }
}

fn run_convert(args: &ConvertArgs) -> Result<()> {
    let unipartite = io::ingest_unipartite(&args.input)?;
    let assignment = label_propagation(&unipartite, args.seed, args.max_rounds);
    if !assignment.converged {
        eprintln!(
            "warning: label propagation stopped at the {}-round cap without a fixed point",
            args.max_rounds
        );
    }
    let bipartite = project_to_bipartite(&unipartite, &assignment.labels)?;
    eprintln!(
        "detected {} communities over {} nodes in {} rounds",
        bipartite.num_communities(),
        unipartite.num_nodes(),
        assignment.rounds
    );
    if bipartite.num_communities() == 1 {
        eprintln!("warning: conversion found a single community");
    }
    let target = resolve_output(args.output.output.as_deref());
    io::export_edge_list(&target, &bipartite)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Disrupt(args) => run_disrupt(args),
        Command::Dauc(args) => run_dauc(args),
        Command::Population(args) => run_population(args),
        Command::Giant(args) => run_giant(args),
        Command::Cheeger(args) => run_cheeger(args),
        Command::Generate(args) => run_generate(args),
        Command::Rewire(args) => run_rewire(args),
        Command::Analytic(args) => run_analytic(args),
        Command::Convert(args) => run_convert(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            let object = serde_json::json!({
                "error": {
                    "kind": error.kind(),
                    "message": error.to_string(),
                }
            });
            eprintln!("{object}");
            ExitCode::FAILURE
        }
    }
}
