//! Degree assortativity measures and degree-preserving rewiring sweeps.
//!
//! Rewiring draws edge pairs from a shuffled edge list and swaps their
//! community endpoints when the swap strictly moves the user-community
//! degree correlation in the requested direction without creating duplicate
//! edges. Swapped edges must carry equal weight, which keeps every user's
//! and every community's weighted and unweighted degree exact; a swap then
//! only re-pairs fixed degree values, so each candidate is evaluated in
//! constant time from the running correlation numerator.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::disruption::{dauc, disruption_curve};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, RankingKey};

/// A Pearson correlation that may be undefined (zero variance or no
/// samples); undefined values carry 0 and a cleared flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Assortativity {
    pub value: f64,
    pub defined: bool,
}

impl Assortativity {
    pub fn undefined() -> Self {
        Self {
            value: 0.0,
            defined: false,
        }
    }

    fn defined(value: f64) -> Self {
        Self {
            value,
            defined: true,
        }
    }
}

/// Two-pass Pearson correlation over paired samples.
fn pearson(samples: &[(f64, f64)]) -> Assortativity {
    let n = samples.len() as f64;
    if samples.len() < 2 {
        return Assortativity::undefined();
    }
    let mean_x = samples.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = samples.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in samples {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Assortativity::undefined();
    }
    Assortativity::defined(sxy / (sxx * syy).sqrt())
}

/// Pearson correlation between endpoint user and community degrees over the
/// distinct edges of the graph. Weighted degrees by default, matching the
/// disruption metric.
pub fn user_community_assortativity(g: &BipartiteGraph, weighted: bool) -> Assortativity {
    let samples: Vec<(f64, f64)> = g
        .edges()
        .iter()
        .map(|edge| {
            let user_degree = if weighted {
                g.user_weighted_degree(edge.user)
            } else {
                g.user_unique_degree(edge.user)
            };
            let community_degree = if weighted {
                g.community_weighted_degree(edge.community)
            } else {
                g.community_unique_degree(edge.community)
            };
            (user_degree as f64, community_degree as f64)
        })
        .collect();
    pearson(&samples)
}

/// Assortativities of the community-community projection: one projected edge
/// wherever two communities share a user. Returns the correlation of
/// endpoint weighted degrees and of endpoint population sizes, both over the
/// symmetrized projected edge list.
pub fn projected_community_assortativities(g: &BipartiteGraph) -> (Assortativity, Assortativity) {
    let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    for user in 0..g.num_users() as u32 {
        let adjacency = g.user_adjacency(user);
        for i in 0..adjacency.len() {
            for j in (i + 1)..adjacency.len() {
                let (a, b) = (adjacency[i].0, adjacency[j].0);
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    if pairs.is_empty() {
        return (Assortativity::undefined(), Assortativity::undefined());
    }

    let mut degree_samples = Vec::with_capacity(pairs.len() * 2);
    let mut population_samples = Vec::with_capacity(pairs.len() * 2);
    for &(a, b) in &pairs {
        let (da, db) = (
            g.community_weighted_degree(a) as f64,
            g.community_weighted_degree(b) as f64,
        );
        let (pa, pb) = (
            g.community_unique_degree(a) as f64,
            g.community_unique_degree(b) as f64,
        );
        degree_samples.push((da, db));
        degree_samples.push((db, da));
        population_samples.push((pa, pb));
        population_samples.push((pb, pa));
    }
    (pearson(&degree_samples), pearson(&population_samples))
}

/// Direction a swap must move the user-community degree correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewireDirection {
    Increase,
    Decrease,
}

/// Metrics recorded when a rewiring run crosses a target fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewiringCheckpoint {
    pub target_fraction: f64,
    /// Accepted swaps over distinct edges at the time of recording.
    pub achieved_fraction: f64,
    pub accepted_swaps: u64,
    pub user_community_assortativity: Assortativity,
    pub projected_degree_assortativity: Assortativity,
    pub projected_population_assortativity: Assortativity,
    pub dauc: f64,
}

/// Checkpointed record of a rewiring run. `completed` clears when the edge
/// supply was exhausted before the last target fraction was reached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewiringTrace {
    pub direction: RewireDirection,
    pub checkpoints: Vec<RewiringCheckpoint>,
    pub completed: bool,
}

struct SwapState {
    edges: Vec<crate::graph::Edge>,
    user_degree: Vec<u64>,
    community_degree: Vec<u64>,
    occupied: HashSet<(u32, u32)>,
    accepted: u64,
}

impl SwapState {
    fn new(g: &BipartiteGraph) -> Self {
        let user_degree: Vec<u64> = (0..g.num_users() as u32)
            .map(|u| g.user_weighted_degree(u))
            .collect();
        let community_degree: Vec<u64> = (0..g.num_communities() as u32)
            .map(|c| g.community_weighted_degree(c))
            .collect();
        let occupied: HashSet<(u32, u32)> =
            g.edges().iter().map(|e| (e.user, e.community)).collect();
        Self {
            edges: g.edges().to_vec(),
            user_degree,
            community_degree,
            occupied,
            accepted: 0,
        }
    }

    /// Swap acceptance test; applies the swap when it strictly moves the
    /// correlation numerator the right way.
    fn try_swap(&mut self, first: usize, second: usize, direction: RewireDirection) -> bool {
        let (e1, e2) = (self.edges[first], self.edges[second]);
        if e1.weight != e2.weight {
            return false;
        }
        if self.occupied.contains(&(e1.user, e2.community))
            || self.occupied.contains(&(e2.user, e1.community))
        {
            return false;
        }
        // Sxy changes by -(x1 - x2)(y1 - y2) when the communities swap.
        let dx =
            self.user_degree[e1.user as usize] as i128 - self.user_degree[e2.user as usize] as i128;
        let dy = self.community_degree[e1.community as usize] as i128
            - self.community_degree[e2.community as usize] as i128;
        let numerator_delta = -(dx * dy);
        let improves = match direction {
            RewireDirection::Increase => numerator_delta > 0,
            RewireDirection::Decrease => numerator_delta < 0,
        };
        if !improves {
            return false;
        }

        self.occupied.remove(&(e1.user, e1.community));
        self.occupied.remove(&(e2.user, e2.community));
        self.occupied.insert((e1.user, e2.community));
        self.occupied.insert((e2.user, e1.community));
        self.edges[first].community = e2.community;
        self.edges[second].community = e1.community;
        self.accepted += 1;
        true
    }

    fn snapshot(&self, g: &BipartiteGraph) -> BipartiteGraph {
        BipartiteGraph::from_parts(
            g.community_ids().to_vec(),
            g.user_ids().to_vec(),
            self.edges.clone(),
        )
    }
}

fn checkpoint(
    state: &SwapState,
    g: &BipartiteGraph,
    target_fraction: f64,
) -> Result<RewiringCheckpoint> {
    let snapshot = state.snapshot(g);
    let plan = snapshot.removal_plan(RankingKey::UniqueUsers);
    let curve = disruption_curve(&snapshot, &plan, true)?;
    let (projected_degree, projected_population) = projected_community_assortativities(&snapshot);
    Ok(RewiringCheckpoint {
        target_fraction,
        achieved_fraction: state.accepted as f64 / snapshot.distinct_edges() as f64,
        accepted_swaps: state.accepted,
        user_community_assortativity: user_community_assortativity(&snapshot, true),
        projected_degree_assortativity: projected_degree,
        projected_population_assortativity: projected_population,
        dauc: dauc(&curve)?,
    })
}

fn run_rewiring(
    g: &BipartiteGraph,
    direction: RewireDirection,
    fractions: &[f64],
    seed: u64,
) -> Result<(SwapState, RewiringTrace)> {
    if g.distinct_edges() < 2 {
        return Err(Error::InvalidParameter(
            "rewiring needs at least 2 distinct edges".into(),
        ));
    }
    for window in fractions.windows(2) {
        if window[1] < window[0] {
            return Err(Error::InvalidParameter(
                "target fractions must be sorted ascending".into(),
            ));
        }
    }
    for &fraction in fractions {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidParameter(format!(
                "target fraction {fraction} outside [0, 1]"
            )));
        }
    }

    let edge_count = g.distinct_edges();
    let mut state = SwapState::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = RewiringTrace {
        direction,
        checkpoints: Vec::with_capacity(fractions.len()),
        completed: true,
    };

    // Swap counts needed to reach each fraction; smallest count making
    // accepted / edges >= fraction.
    let targets: Vec<u64> = fractions
        .iter()
        .map(|f| (f * edge_count as f64).ceil() as u64)
        .collect();
    let mut next = 0usize;
    while next < targets.len() && state.accepted >= targets[next] {
        trace
            .checkpoints
            .push(checkpoint(&state, g, fractions[next])?);
        next += 1;
    }

    let mut permutation: Vec<usize> = (0..edge_count).collect();
    'passes: while next < targets.len() {
        permutation.shuffle(&mut rng);
        let mut accepted_this_pass = 0u64;
        for pair in permutation.chunks_exact(2) {
            if state.try_swap(pair[0], pair[1], direction) {
                accepted_this_pass += 1;
                while next < targets.len() && state.accepted >= targets[next] {
                    trace
                        .checkpoints
                        .push(checkpoint(&state, g, fractions[next])?);
                    next += 1;
                }
                if next >= targets.len() {
                    break 'passes;
                }
            }
        }
        if accepted_this_pass == 0 {
            // Edge supply exhausted: report the state reached for the first
            // unmet target and stop.
            trace
                .checkpoints
                .push(checkpoint(&state, g, fractions[next])?);
            trace.completed = false;
            break;
        }
    }

    Ok((state, trace))
}

/// Rewires toward a single target fraction of accepted swaps, returning the
/// rewired graph and its trace. An unreachable target yields a partial
/// trace (`completed == false`), not an error.
pub fn rewire(
    g: &BipartiteGraph,
    direction: RewireDirection,
    target_fraction: f64,
    seed: u64,
) -> Result<(BipartiteGraph, RewiringTrace)> {
    let (state, trace) = run_rewiring(g, direction, &[target_fraction], seed)?;
    Ok((state.snapshot(g), trace))
}

/// Cumulative rewiring checkpointed at each ascending fraction.
pub fn rewiring_sweep(
    g: &BipartiteGraph,
    direction: RewireDirection,
    fractions: &[f64],
    seed: u64,
) -> Result<RewiringTrace> {
    let (_, trace) = run_rewiring(g, direction, fractions, seed)?;
    Ok(trace)
}
