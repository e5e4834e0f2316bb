//! Acceptance suite: one test per release criterion, each printing a
//! `[PASS]`/`[FAIL]` line (run with `--nocapture` to see them on success).
//! Every tolerance is pinned in code; seeds are fixed so the suite is
//! deterministic.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use centric_core::{
    analytic_disruption, bipartite_er, cheeger_bounds, correlated_joint, dauc, disruption_curve,
    label_propagation, near_star, powerlaw_config, project_to_bipartite, random_joint,
    rewiring_sweep, sample_finite_network, size_class_disruption, truncated_binomial,
    zero_truncated, BipartiteGraph, CorrelationSetting, Coupling, EdgeRecord, RankingKey,
    RemovalPlan, RewireDirection, UnipartiteGraph, UnipartiteRecord,
};

fn verdict(number: u8, name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("[PASS] criterion {number}: {name}");
    } else {
        println!("[FAIL] criterion {number}: {name}");
        for failure in failures.iter().take(12) {
            println!("       - {failure}");
        }
        if failures.len() > 12 {
            println!("       ... and {} more", failures.len() - 12);
        }
        panic!(
            "criterion {number} failed with {} violation(s)",
            failures.len()
        );
    }
}

fn check_runtime(failures: &mut Vec<String>, elapsed: Duration, budget: Duration) {
    if elapsed > budget {
        failures.push(format!(
            "runtime {elapsed:?} exceeded the {budget:?} budget"
        ));
    }
}

// -------------------------------------------------------------------------
// criterion 1: near-star exactness
// -------------------------------------------------------------------------

#[test]
fn criterion_1_near_star_exactness() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let graph = near_star(150, 3000, 42).unwrap();
    let plan = graph.removal_plan(RankingKey::UniqueUsers);
    let curve = disruption_curve(&graph, &plan, true).unwrap();
    let values = curve.disruptions();

    // integer degree sums make 0.5 exactly representable: tolerance zero
    if values[0] != 0.5 {
        failures.push(format!("step 1 disruption {} != 0.5", values[0]));
    }
    for (index, &value) in values[..149].iter().enumerate() {
        if value != 0.5 {
            failures.push(format!("step {} disruption {} != 0.5", index + 1, value));
        }
    }
    if values[149] != 1.0 {
        failures.push(format!("final step disruption {} != 1.0", values[149]));
    }

    check_runtime(&mut failures, started.elapsed(), Duration::from_secs(1));
    verdict(1, "near-star exactness", failures);
}

// -------------------------------------------------------------------------
// criterion 2: oracle equivalence
// -------------------------------------------------------------------------

/// Independent oracle: per-step graph recomputation over each plan prefix.
fn per_step_recomputation(g: &BipartiteGraph, plan: &RemovalPlan, weighted: bool) -> Vec<f64> {
    let mut curve = Vec::new();
    for prefix in 1..=g.num_communities() {
        let removed: HashSet<u32> = plan.order()[..prefix].iter().copied().collect();
        let mut remaining = 0u64;
        let mut original = 0u64;
        let mut survivors = 0u64;
        for user in 0..g.num_users() as u32 {
            let adjacency = g.user_adjacency(user);
            let kept: u64 = adjacency
                .iter()
                .filter(|(community, _)| !removed.contains(community))
                .map(|(_, weight)| if weighted { *weight } else { 1 })
                .sum();
            if kept > 0 {
                survivors += 1;
                remaining += kept;
                original += adjacency
                    .iter()
                    .map(|(_, weight)| if weighted { *weight } else { 1 })
                    .sum::<u64>();
            }
        }
        curve.push(if survivors == 0 {
            1.0
        } else {
            1.0 - remaining as f64 / original as f64
        });
    }
    curve
}

fn random_graph(seed: u64) -> BipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let communities = rng.random_range(1..=20usize);
    let users = rng.random_range(1..=100usize);
    let rows = rng.random_range(1..=250usize);
    let records: Vec<EdgeRecord> = (0..rows)
        .map(|_| {
            EdgeRecord::new(
                format!("u{:03}", rng.random_range(0..users)),
                format!("c{:02}", rng.random_range(0..communities)),
                rng.random_range(1..=5i64),
            )
        })
        .collect();
    BipartiteGraph::from_records(&records).unwrap()
}

#[test]
fn criterion_2_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();

    for seed in 0..200u64 {
        let graph = random_graph(seed);
        for key in [RankingKey::UniqueUsers, RankingKey::WeightedDegree] {
            let plan = graph.removal_plan(key);
            for weighted in [true, false] {
                let fast = disruption_curve(&graph, &plan, weighted).unwrap();
                let oracle = per_step_recomputation(&graph, &plan, weighted);
                if fast.disruptions() != oracle {
                    failures.push(format!(
                        "seed {seed} ({key:?}, weighted={weighted}): sweep != per-step oracle"
                    ));
                }
            }
        }
    }

    check_runtime(&mut failures, started.elapsed(), Duration::from_secs(30));
    verdict(
        2,
        "fast sweep equals per-step recomputation on 200 graphs",
        failures,
    );
}

// -------------------------------------------------------------------------
// criterion 3: analytic validation
// -------------------------------------------------------------------------

/// Reference ensemble: 30 users per community, binomial memberships with
/// mean 1.2, community sizes from the matching edge-count binomial.
fn reference_marginals(communities: usize) -> (Vec<f64>, Vec<f64>) {
    let users = 30 * communities;
    let membership_probability = 1.2 / communities as f64;
    let p_n =
        zero_truncated(&truncated_binomial(users, membership_probability, 1e-9).unwrap()).unwrap();
    let g_m = truncated_binomial(communities, membership_probability, 1e-9).unwrap();
    (p_n, g_m)
}

#[test]
fn criterion_3_analytic_validation() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let communities = 10_000usize;
    let runs = 100u64;
    let (p_n, g_m) = reference_marginals(communities);
    let model = random_joint(&p_n, &g_m).unwrap();
    let predicted: HashMap<usize, f64> = analytic_disruption(&model)
        .unwrap()
        .iter()
        .filter(|point| !point.denominator_zero)
        .map(|point| (point.size, point.disruption))
        .collect();

    let mut samples: HashMap<usize, Vec<f64>> = HashMap::new();
    for seed in 0..runs {
        let graph = sample_finite_network(&model, communities, 1000 + seed).unwrap();
        for point in size_class_disruption(&graph) {
            if point.defined {
                samples
                    .entry(point.size)
                    .or_default()
                    .push(point.disruption);
            }
        }
    }

    // classes realized in every replicate have an unconditional Monte-Carlo
    // mean; rarer classes only appear conditioned on their own existence
    let mut checked = 0usize;
    for (&size, values) in &samples {
        if values.len() < runs as usize {
            continue;
        }
        let Some(&prediction) = predicted.get(&size) else {
            continue;
        };
        let count = values.len() as f64;
        let mean = values.iter().sum::<f64>() / count;
        let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt();
        let half_width = 1.96 * sd / count.sqrt();
        checked += 1;
        if (mean - prediction).abs() > half_width {
            failures.push(format!(
                "size {size}: analytic {prediction:.6} outside {mean:.6} +- {half_width:.6}"
            ));
        }
    }
    if checked < 20 {
        failures.push(format!("only {checked} fully-populated size classes"));
    }

    check_runtime(&mut failures, started.elapsed(), Duration::from_secs(300));
    verdict(
        3,
        "sampled ensembles match the closed form within the 95% Monte-Carlo interval",
        failures,
    );
}

// -------------------------------------------------------------------------
// criterion 4: correlation sign reproduction
// -------------------------------------------------------------------------

#[test]
fn criterion_4_correlation_sign_reproduction() {
    let mut failures = Vec::new();

    let (p_n, g_m) = reference_marginals(10_000);
    let random = random_joint(&p_n, &g_m).unwrap();
    let base = analytic_disruption(&random).unwrap();

    for direction in [Coupling::TowardMax, Coupling::TowardMin] {
        let mixed = correlated_joint(
            &p_n,
            &g_m,
            CorrelationSetting {
                rho: 0.3,
                direction,
            },
        )
        .unwrap();
        let shifted = analytic_disruption(&mixed).unwrap();
        for (b, s) in base.iter().zip(shifted.iter()) {
            assert_eq!(b.size, s.size);
            if b.denominator_zero || b.disruption <= 0.0 {
                continue;
            }
            let ok = match direction {
                Coupling::TowardMax => s.disruption >= b.disruption,
                Coupling::TowardMin => s.disruption <= b.disruption,
            };
            if !ok {
                failures.push(format!(
                    "{direction:?} at size {}: correlated {:.6} vs random {:.6}",
                    b.size, s.disruption, b.disruption
                ));
            }
        }
    }

    verdict(
        4,
        "rho = 0.3 coupling shifts disruption pointwise in the coupling direction",
        failures,
    );
}

// -------------------------------------------------------------------------
// criterion 5: Cheeger sandwich
// -------------------------------------------------------------------------

#[test]
fn criterion_5_cheeger_sandwich() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let shapes = [
        (2usize, 6usize, 0.5f64),
        (3, 7, 0.45),
        (4, 8, 0.4),
        (3, 9, 0.35),
        (5, 7, 0.4),
    ];
    let mut checked = 0usize;
    let mut seed = 0u64;
    while checked < 200 {
        seed += 1;
        let (communities, users, p) = shapes[checked % shapes.len()];
        let graph = match bipartite_er(communities, users, p, seed) {
            Ok(graph) => graph,
            Err(_) => continue,
        };
        let estimate = match cheeger_bounds(&graph, 1e-8, true) {
            Ok(estimate) => estimate,
            Err(error) => {
                failures.push(format!("seed {seed}: {error}"));
                continue;
            }
        };
        // the sandwich compares one connected graph's eigenvalue and exact
        // conductance; skip draws whose graph fell apart
        if estimate.restricted_to_giant {
            continue;
        }
        let Some(exact) = estimate.exact else {
            continue;
        };
        checked += 1;
        // slack matches the 1e-8 eigensolver tolerance
        if !(estimate.lower - 1e-8 <= exact && exact <= estimate.upper + 1e-8) {
            failures.push(format!(
                "seed {seed}: exact {exact:.9} outside [{:.9}, {:.9}]",
                estimate.lower, estimate.upper
            ));
        }
    }

    check_runtime(&mut failures, started.elapsed(), Duration::from_secs(60));
    verdict(
        5,
        "exact Cheeger number sits inside the spectral bounds on 200 graphs",
        failures,
    );
}

// -------------------------------------------------------------------------
// criterion 6: rewiring conservation
// -------------------------------------------------------------------------

type DegreePairs = Vec<(u64, u64)>;

fn degree_multisets(g: &BipartiteGraph) -> (DegreePairs, DegreePairs) {
    let mut users: Vec<(u64, u64)> = (0..g.num_users() as u32)
        .map(|u| (g.user_unique_degree(u), g.user_weighted_degree(u)))
        .collect();
    let mut communities: Vec<(u64, u64)> = (0..g.num_communities() as u32)
        .map(|c| (g.community_unique_degree(c), g.community_weighted_degree(c)))
        .collect();
    users.sort_unstable();
    communities.sort_unstable();
    (users, communities)
}

#[test]
fn criterion_6_rewiring_conservation() {
    let mut failures = Vec::new();

    let weighted_toy: Vec<EdgeRecord> = (0..40i64)
        .flat_map(|i| {
            [
                EdgeRecord::new(
                    format!("u{i:02}"),
                    format!("c{:02}", (2 * i) % 17),
                    1 + i % 4,
                ),
                EdgeRecord::new(
                    format!("u{i:02}"),
                    format!("c{:02}", (2 * i + 5) % 17),
                    1 + (i + 2) % 4,
                ),
            ]
        })
        .collect();
    let graphs = vec![
        ("near-star", near_star(10, 60, 3).unwrap()),
        ("erdos-renyi", bipartite_er(12, 120, 0.08, 21).unwrap()),
        ("powerlaw", powerlaw_config(15, 80, 2.5, 8).unwrap()),
        (
            "weighted toy",
            BipartiteGraph::from_records(&weighted_toy).unwrap(),
        ),
    ];
    let fractions = [0.0, 0.05, 0.15, 0.3];

    for (label, graph) in &graphs {
        let before = degree_multisets(graph);
        for direction in [RewireDirection::Increase, RewireDirection::Decrease] {
            let (rewired, trace) = centric_core::rewire(graph, direction, 0.3, 17).unwrap();
            if degree_multisets(&rewired) != before {
                failures.push(format!("{label} {direction:?}: degree multisets changed"));
            }
            if rewired.distinct_edges() != graph.distinct_edges() {
                failures.push(format!("{label} {direction:?}: edge count changed"));
            }
            if rewired.total_weight() != graph.total_weight() {
                failures.push(format!("{label} {direction:?}: total weight changed"));
            }
            drop(trace);

            let sweep = rewiring_sweep(graph, direction, &fractions, 17).unwrap();
            for pair in sweep.checkpoints.windows(2) {
                let (a, b) = (
                    pair[0].user_community_assortativity,
                    pair[1].user_community_assortativity,
                );
                if !(a.defined && b.defined) {
                    continue;
                }
                let monotone = match direction {
                    RewireDirection::Increase => b.value >= a.value - 1e-12,
                    RewireDirection::Decrease => b.value <= a.value + 1e-12,
                };
                if !monotone {
                    failures.push(format!(
                        "{label} {direction:?}: assortativity moved {} -> {}",
                        a.value, b.value
                    ));
                }
            }
        }
    }

    verdict(
        6,
        "rewiring conserves degrees exactly and moves assortativity monotonically",
        failures,
    );
}

// -------------------------------------------------------------------------
// criterion 7: qualitative reference-curve ordering
// -------------------------------------------------------------------------

fn mean_curve_and_daucs(
    generate: impl Fn(u64) -> BipartiteGraph,
    seeds: u64,
) -> (Vec<f64>, Vec<f64>) {
    let mut sums: Option<Vec<f64>> = None;
    let mut daucs = Vec::new();
    for seed in 0..seeds {
        let graph = generate(seed);
        let plan = graph.removal_plan(RankingKey::UniqueUsers);
        let curve = disruption_curve(&graph, &plan, true).unwrap();
        daucs.push(dauc(&curve).unwrap());
        let values = curve.disruptions();
        let sums = sums.get_or_insert_with(|| vec![0.0; values.len()]);
        assert_eq!(sums.len(), values.len(), "replicate curve lengths differ");
        for (sum, value) in sums.iter_mut().zip(&values) {
            *sum += value;
        }
    }
    let mean: Vec<f64> = sums.unwrap().iter().map(|s| s / seeds as f64).collect();
    (mean, daucs)
}

fn max_absolute_second_difference(curve: &[f64]) -> f64 {
    curve
        .windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_7_reference_curve_ordering() {
    let mut failures = Vec::new();
    let seeds = 100u64;

    let (er_mean, er_daucs) =
        mean_curve_and_daucs(|seed| bipartite_er(300, 9000, 0.05, seed).unwrap(), seeds);
    let (powerlaw_mean, _) =
        mean_curve_and_daucs(|seed| powerlaw_config(300, 9000, 2.5, seed).unwrap(), seeds);
    let (_, star_daucs) = mean_curve_and_daucs(|seed| near_star(300, 9000, seed).unwrap(), seeds);

    let er_second = max_absolute_second_difference(&er_mean);
    let powerlaw_second = max_absolute_second_difference(&powerlaw_mean);
    if er_second >= powerlaw_second {
        failures.push(format!(
            "ER second difference {er_second:.5} not below powerlaw {powerlaw_second:.5}"
        ));
    }

    let er_dauc = er_daucs.iter().sum::<f64>() / seeds as f64;
    let star_dauc = star_daucs.iter().sum::<f64>() / seeds as f64;
    if star_dauc <= er_dauc {
        failures.push(format!(
            "near-star DAUC {star_dauc:.4} not above ER DAUC {er_dauc:.4}"
        ));
    }

    verdict(
        7,
        "ER ensembles stay flattest and the near-star out-centralizes them",
        failures,
    );
}

// -------------------------------------------------------------------------
// criterion 8: byte-identical determinism of every subcommand
// -------------------------------------------------------------------------

fn run_to_file(dir: &Path, args: &[&str], output: &str) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_centric"))
        .args(args)
        .args(["--output", output])
        .env_remove("CENTRIC_OUTPUT_DIR")
        .current_dir(dir)
        .output()
        .expect("binary runs");
    assert!(
        status.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&status.stderr)
    );
    std::fs::read(dir.join(output)).unwrap()
}

#[test]
fn criterion_8_subcommand_determinism() {
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();

    std::fs::write(
        dir.join("uni.csv"),
        "source,target,weight\na,b,2\nb,c,1\nc,a,1\nc,d,1\nd,e,1\ne,f,2\nf,d,1\n",
    )
    .unwrap();
    std::fs::write(
        dir.join("model.json"),
        r#"{"p_n": [[2, 0.4], [5, 0.6]], "g_m": [[1, 0.5], [2, 0.3], [3, 0.2]]}"#,
    )
    .unwrap();

    let er: &[&str] = &[
        "--topology",
        "bipartite-er",
        "--communities",
        "15",
        "--users",
        "120",
        "--edge-probability",
        "0.08",
        "--seed",
        "9",
    ];
    let mut invocations: Vec<(&str, Vec<&str>)> = vec![
        ("generate", ["generate"].iter().chain(er).copied().collect()),
        (
            "disrupt",
            ["disrupt", "--runs", "5", "--format", "json"]
                .iter()
                .chain(er)
                .copied()
                .collect(),
        ),
        (
            "dauc",
            ["dauc", "--runs", "3"].iter().chain(er).copied().collect(),
        ),
        (
            "population",
            ["population"].iter().chain(er).copied().collect(),
        ),
        (
            "giant",
            ["giant", "--format", "json"]
                .iter()
                .chain(er)
                .copied()
                .collect(),
        ),
        (
            "cheeger",
            ["cheeger", "--format", "json"]
                .iter()
                .chain(er)
                .copied()
                .collect(),
        ),
        (
            "cheeger-local",
            ["cheeger", "--local"].iter().chain(er).copied().collect(),
        ),
        (
            "rewire",
            [
                "rewire",
                "--direction",
                "increase",
                "--fractions",
                "0,0.1,0.2",
            ]
            .iter()
            .chain(er)
            .copied()
            .collect(),
        ),
        ("analytic-curve", vec!["analytic", "--model", "model.json"]),
        (
            "analytic-rho",
            vec![
                "analytic",
                "--model",
                "model.json",
                "--rho",
                "0.3",
                "--direction",
                "max",
                "--format",
                "json",
            ],
        ),
        (
            "analytic-sample",
            vec![
                "analytic",
                "--model",
                "model.json",
                "--sample",
                "200",
                "--seed",
                "4",
            ],
        ),
        (
            "convert",
            vec!["convert", "--input", "uni.csv", "--seed", "5"],
        ),
    ];

    for (label, args) in invocations.drain(..) {
        // identical invocations, including the output path, run twice
        let output = format!("{label}.out");
        let first = run_to_file(dir, &args, &output);
        let second = run_to_file(dir, &args, &output);
        if first != second {
            failures.push(format!("{label}: repeated runs differ"));
        }
        if first.is_empty() {
            failures.push(format!("{label}: produced an empty file"));
        }
    }

    verdict(
        8,
        "identical config and seed give byte-identical outputs",
        failures,
    );
}

// -------------------------------------------------------------------------
// criterion 9: conversion conservation
// -------------------------------------------------------------------------

#[test]
fn criterion_9_conversion_conservation() {
    let mut failures = Vec::new();

    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nodes = rng.random_range(6..=60usize);
        let edge_rows = rng.random_range(nodes..=nodes * 3);
        let mut records = Vec::new();
        // a spanning cycle keeps every node attached
        for node in 0..nodes {
            records.push(UnipartiteRecord::new(
                format!("n{node:02}"),
                format!("n{:02}", (node + 1) % nodes),
                rng.random_range(1..=5i64),
            ));
        }
        for _ in 0..edge_rows {
            let a = rng.random_range(0..nodes);
            let b = rng.random_range(0..nodes);
            if a == b {
                continue;
            }
            records.push(UnipartiteRecord::new(
                format!("n{a:02}"),
                format!("n{b:02}"),
                rng.random_range(1..=5i64),
            ));
        }
        let unipartite = UnipartiteGraph::from_records(&records).unwrap();
        let assignment = label_propagation(&unipartite, seed, 100);
        let bipartite = project_to_bipartite(&unipartite, &assignment.labels).unwrap();
        if bipartite.total_weight() != 2 * unipartite.total_weight() {
            failures.push(format!(
                "seed {seed}: bipartite weight {} != 2 x {}",
                bipartite.total_weight(),
                unipartite.total_weight()
            ));
        }
    }

    verdict(
        9,
        "projection carries exactly twice the unipartite edge weight",
        failures,
    );
}
