//! Cumulative disruption curves and their summary statistics.
//!
//! Removing the communities in a plan prefix prunes every user whose whole
//! membership lies inside the prefix. A step's disruption is the fraction of
//! the *surviving* users' original degree that the removal severed:
//! `1 - remaining / original`. The final step, where nothing survives, is
//! pinned to 1.0.
//!
//! All curves here run as one pass over users sorted by the step at which
//! they are pruned (`smallest_community_rank`); nothing mutates a graph per
//! step. Tests pit this sweep against naive per-step recomputation.

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, RemovalPlan};

/// One step of a disruption curve: the first `removed` communities of the
/// plan are gone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisruptionStep {
    pub removed: usize,
    pub fraction_removed: f64,
    pub disruption: f64,
    pub surviving_users: u64,
    /// Weight of edges still attached to surviving users (distinct-edge
    /// count in unweighted mode).
    pub surviving_edge_weight: u64,
}

/// Disruption at every prefix of a removal plan, `removed` running `1..=C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisruptionCurve {
    steps: Vec<DisruptionStep>,
}

impl DisruptionCurve {
    pub fn steps(&self) -> &[DisruptionStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn disruptions(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.disruption).collect()
    }

    /// Rebuilds a curve from raw steps (used when loading exported curves).
    pub fn from_steps(steps: Vec<DisruptionStep>) -> Self {
        Self { steps }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationPoint {
    /// Fraction of communities included, smallest first.
    pub fraction_included: f64,
    /// Cumulative membership count over total memberships.
    pub cumulative_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GiantComponentPoint {
    pub removed: usize,
    /// Largest-component vertex count over its pre-removal value, counting
    /// both users and communities.
    pub fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalCheegerPoint {
    pub removed: usize,
    /// Boundary-crossing edge weight over all edge weight incident to the
    /// removed set.
    pub value: f64,
}

/// Per-user degree under the metric's weighting mode.
fn user_degree(g: &BipartiteGraph, user: u32, weighted: bool) -> u64 {
    if weighted {
        g.user_weighted_degree(user)
    } else {
        g.user_unique_degree(user)
    }
}

fn community_metric_degree(g: &BipartiteGraph, community: u32, weighted: bool) -> u64 {
    if weighted {
        g.community_weighted_degree(community)
    } else {
        g.community_unique_degree(community)
    }
}

/// Cumulative disruption over every prefix of the plan.
///
/// With `weighted` set (the library default) degrees are edge-weight sums;
/// otherwise distinct-edge counts. The result is identical to removing the
/// prefix, pruning isolated users, and recomputing degrees at every step.
pub fn disruption_curve(
    g: &BipartiteGraph,
    plan: &RemovalPlan,
    weighted: bool,
) -> Result<DisruptionCurve> {
    let communities = g.num_communities();
    let ranks = g.smallest_community_rank(plan)?;

    // Degree mass of users pruned exactly at each plan position.
    let mut degree_at_rank = vec![0u64; communities];
    let mut users_at_rank = vec![0u64; communities];
    for (user, &rank) in ranks.iter().enumerate() {
        degree_at_rank[rank as usize] += user_degree(g, user as u32, weighted);
        users_at_rank[rank as usize] += 1;
    }

    // Edge weight still attached after removing a prefix: an edge survives
    // exactly when its community does, and its user is then alive too.
    let mut remaining_after = vec![0u64; communities + 1];
    for (position, &community) in plan.order().iter().enumerate().rev() {
        remaining_after[position] =
            remaining_after[position + 1] + community_metric_degree(g, community, weighted);
    }

    let mut steps = Vec::with_capacity(communities);
    let mut surviving_degree: u64 = degree_at_rank.iter().sum();
    let mut surviving_users: u64 = users_at_rank.iter().sum();
    for k in 1..=communities {
        surviving_degree -= degree_at_rank[k - 1];
        surviving_users -= users_at_rank[k - 1];
        let remaining = remaining_after[k];
        let disruption = if surviving_users == 0 {
            1.0
        } else {
            1.0 - remaining as f64 / surviving_degree as f64
        };
        steps.push(DisruptionStep {
            removed: k,
            fraction_removed: k as f64 / communities as f64,
            disruption,
            surviving_users,
            surviving_edge_weight: remaining,
        });
    }

    Ok(DisruptionCurve { steps })
}

/// Area under the disruption curve, integrated against the logarithm of the
/// fraction removed and normalized to `[0, 1]`.
///
/// The normalization divides by the total log-space width, so the value is
/// independent of the logarithm base. Length-one curves return their single
/// disruption value.
pub fn dauc(curve: &DisruptionCurve) -> Result<f64> {
    let steps = curve.steps();
    match steps.len() {
        0 => Err(Error::EmptyCurve),
        1 => Ok(steps[0].disruption),
        c => {
            let mut area = 0.0;
            for pair in steps.windows(2) {
                let width = (pair[1].fraction_removed / pair[0].fraction_removed).ln();
                area += 0.5 * (pair[0].disruption + pair[1].disruption) * width;
            }
            Ok(area / (c as f64).ln())
        }
    }
}

/// Cumulative membership share as communities are included smallest-first,
/// the reverse of the removal order. Users in several communities count once
/// per membership.
pub fn population_curve(g: &BipartiteGraph, plan: &RemovalPlan) -> Result<Vec<PopulationPoint>> {
    g.plan_positions(plan)?;
    let communities = g.num_communities();
    let total: u64 = (0..communities as u32)
        .map(|c| g.community_unique_degree(c))
        .sum();

    let mut points = Vec::with_capacity(communities);
    let mut cumulative = 0u64;
    for (included, &community) in plan.order().iter().rev().enumerate() {
        cumulative += g.community_unique_degree(community);
        points.push(PopulationPoint {
            fraction_included: (included + 1) as f64 / communities as f64,
            cumulative_fraction: cumulative as f64 / total as f64,
        });
    }
    Ok(points)
}

/// Size of the largest connected component after each cumulative removal,
/// counting both vertex classes and normalized by the un-pruned value.
/// The result covers `removed = 0..=C`.
pub fn giant_component_curve(
    g: &BipartiteGraph,
    plan: &RemovalPlan,
) -> Result<Vec<GiantComponentPoint>> {
    g.plan_positions(plan)?;
    let communities = g.num_communities();
    let users = g.num_users();

    let mut community_users: Vec<Vec<u32>> = vec![Vec::new(); communities];
    for edge in g.edges() {
        community_users[edge.community as usize].push(edge.user);
    }

    // Replay removals backwards: adding communities only ever merges
    // components, so one union-find pass covers every prefix.
    let mut dsu = DisjointSets::new(communities + users);
    let mut giant_at = vec![0u32; communities + 1];
    for (position, &community) in plan.order().iter().enumerate().rev() {
        for &user in &community_users[community as usize] {
            dsu.union(community, communities as u32 + user);
        }
        giant_at[position] = dsu.largest();
    }

    let baseline = giant_at[0];
    debug_assert!(
        baseline >= 2,
        "a non-empty graph has a >=2-vertex component"
    );
    Ok(giant_at
        .iter()
        .enumerate()
        .map(|(removed, &size)| GiantComponentPoint {
            removed,
            fraction: size as f64 / baseline as f64,
        })
        .collect())
}

/// Boundary-to-incident edge ratio of each removal prefix: of the edge
/// weight touching the removed communities, the share still attached to a
/// surviving user.
pub fn local_cheeger_curve(
    g: &BipartiteGraph,
    plan: &RemovalPlan,
    weighted: bool,
) -> Result<Vec<LocalCheegerPoint>> {
    let positions = g.plan_positions(plan)?;
    let ranks = g.smallest_community_rank(plan)?;
    let communities = g.num_communities();

    // An edge (u, c) crosses the boundary at step k when c is removed
    // (pos < k) but u still holds an edge elsewhere (rank >= k), i.e. for
    // k in (pos, rank]. Accumulate those intervals with a difference array.
    let mut boundary_delta = vec![0i64; communities + 2];
    for edge in g.edges() {
        let position = positions[edge.community as usize];
        let rank = ranks[edge.user as usize];
        if position < rank {
            let value = if weighted { edge.weight as i64 } else { 1 };
            boundary_delta[position as usize + 1] += value;
            boundary_delta[rank as usize + 1] -= value;
        }
    }

    let mut points = Vec::with_capacity(communities);
    let mut boundary = 0i64;
    let mut incident = 0u64;
    for (step, &community) in plan.order().iter().enumerate() {
        boundary += boundary_delta[step + 1];
        incident += community_metric_degree(g, community, weighted);
        points.push(LocalCheegerPoint {
            removed: step + 1,
            value: boundary as f64 / incident as f64,
        });
    }
    Ok(points)
}
