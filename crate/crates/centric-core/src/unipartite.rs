//! Conversion of unipartite social graphs into bipartite user-community
//! form: detect communities with weighted label propagation, then replace
//! user-user edges with weighted user-community edges.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Edge};

/// Default round cap for label propagation.
pub const DEFAULT_MAX_ROUNDS: usize = 100;

/// Undirected weighted graph without self-loops.
#[derive(Debug, Clone)]
pub struct UnipartiteGraph {
    node_ids: Vec<String>,
    adjacency: Vec<Vec<(u32, u64)>>,
    total_weight: u64,
}

/// Raw unipartite input record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipartiteRecord {
    pub source: String,
    pub target: String,
    pub weight: i64,
}

impl UnipartiteRecord {
    pub fn new(source: impl Into<String>, target: impl Into<String>, weight: i64) -> Self {
        Self {
            source: source.into(),
            target: target.into(),
            weight,
        }
    }
}

impl UnipartiteGraph {
    /// Builds from records, symmetrizing and merging duplicate pairs by
    /// weight sum. Self-loops are rejected.
    pub fn from_records<'a, I>(records: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a UnipartiteRecord>,
    {
        let mut node_ids: Vec<String> = Vec::new();
        let mut node_index: HashMap<String, u32> = HashMap::new();
        let mut pair_weight: HashMap<(u32, u32), u64> = HashMap::new();
        let mut pair_order: Vec<(u32, u32)> = Vec::new();

        for (position, record) in records.into_iter().enumerate() {
            if record.weight < 1 {
                return Err(Error::InvalidWeight {
                    position,
                    weight: record.weight,
                });
            }
            if record.source.is_empty() {
                return Err(Error::EmptyIdentifier {
                    position,
                    field: "source",
                });
            }
            if record.target.is_empty() {
                return Err(Error::EmptyIdentifier {
                    position,
                    field: "target",
                });
            }
            if record.source == record.target {
                return Err(Error::SelfLoop {
                    position,
                    node: record.source.clone(),
                });
            }
            let mut intern = |id: &str| -> u32 {
                *node_index.entry(id.to_string()).or_insert_with(|| {
                    node_ids.push(id.to_string());
                    (node_ids.len() - 1) as u32
                })
            };
            let a = intern(&record.source);
            let b = intern(&record.target);
            let key = (a.min(b), a.max(b));
            match pair_weight.entry(key) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += record.weight as u64;
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(record.weight as u64);
                    pair_order.push(key);
                }
            }
        }

        if pair_order.is_empty() {
            return Err(Error::EmptyGraph);
        }

        let mut adjacency: Vec<Vec<(u32, u64)>> = vec![Vec::new(); node_ids.len()];
        let mut total_weight = 0u64;
        for &(a, b) in &pair_order {
            let w = pair_weight[&(a, b)];
            adjacency[a as usize].push((b, w));
            adjacency[b as usize].push((a, w));
            total_weight += w;
        }

        Ok(Self {
            node_ids,
            adjacency,
            total_weight,
        })
    }

    /// Builds from dense unit parts; used by the small-world generator.
    pub(crate) fn from_parts(node_ids: Vec<String>, edges: &[(u32, u32, u64)]) -> Self {
        let mut adjacency: Vec<Vec<(u32, u64)>> = vec![Vec::new(); node_ids.len()];
        let mut total_weight = 0u64;
        for &(a, b, w) in edges {
            adjacency[a as usize].push((b, w));
            adjacency[b as usize].push((a, w));
            total_weight += w;
        }
        Self {
            node_ids,
            adjacency,
            total_weight,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.node_ids.len()
    }

    pub fn node_id(&self, index: u32) -> &str {
        &self.node_ids[index as usize]
    }

    pub fn neighbors(&self, index: u32) -> &[(u32, u64)] {
        &self.adjacency[index as usize]
    }

    /// Sum of edge weights, each undirected edge counted once.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn degree(&self, index: u32) -> u64 {
        self.adjacency[index as usize].iter().map(|(_, w)| *w).sum()
    }
}

/// Outcome of label propagation: one community label per node.
#[derive(Debug, Clone)]
pub struct LabelAssignment {
    pub labels: Vec<u32>,
    pub rounds: usize,
    pub converged: bool,
}

impl LabelAssignment {
    pub fn community_count(&self) -> usize {
        let mut distinct: Vec<u32> = self.labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len()
    }
}

/// Asynchronous weighted label propagation.
///
/// Nodes are visited in a fresh seeded random order each round and adopt
/// the label with the largest incident weight sum. A node already holding a
/// maximal label keeps it; genuine ties are broken uniformly at random. Runs
/// until a full round changes nothing or `max_rounds` is hit.
pub fn label_propagation(g: &UnipartiteGraph, seed: u64, max_rounds: usize) -> LabelAssignment {
    let n = g.num_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<u32> = (0..n as u32).collect();
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut weight_by_label: HashMap<u32, u64> = HashMap::new();

    for round in 1..=max_rounds {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &node in &order {
            let neighbors = g.neighbors(node);
            if neighbors.is_empty() {
                continue;
            }
            weight_by_label.clear();
            for &(neighbor, weight) in neighbors {
                *weight_by_label
                    .entry(labels[neighbor as usize])
                    .or_insert(0) += weight;
            }
            let best = *weight_by_label.values().max().expect("non-empty");
            let current = labels[node as usize];
            if weight_by_label.get(&current) == Some(&best) {
                continue;
            }
            // Deterministic candidate order, then a seeded uniform pick.
            let mut candidates: Vec<u32> = weight_by_label
                .iter()
                .filter(|(_, &w)| w == best)
                .map(|(&label, _)| label)
                .collect();
            candidates.sort_unstable();
            let pick = if candidates.len() == 1 {
                candidates[0]
            } else {
                candidates[rng.random_range(0..candidates.len())]
            };
            labels[node as usize] = pick;
            changed = true;
        }
        if !changed {
            return LabelAssignment {
                labels,
                rounds: round,
                converged: true,
            };
        }
    }

    LabelAssignment {
        labels,
        rounds: max_rounds,
        converged: false,
    }
}

/// Replaces user-user edges with user-community edges. A user's edge into
/// community `l` weighs the sum of its unipartite edge weights to nodes
/// labeled `l`, the user's own community included. Nodes without edges emit
/// nothing.
pub fn project_to_bipartite(g: &UnipartiteGraph, labels: &[u32]) -> Result<BipartiteGraph> {
    if labels.len() != g.num_nodes() {
        return Err(Error::LabelMismatch {
            labels: labels.len(),
            nodes: g.num_nodes(),
        });
    }

    // Communities keyed by label, named after the label node, in ascending
    // label order for stable indexes.
    let mut distinct: Vec<u32> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let community_of_label: HashMap<u32, u32> = distinct
        .iter()
        .enumerate()
        .map(|(index, &label)| (label, index as u32))
        .collect();
    let community_ids: Vec<String> = distinct
        .iter()
        .map(|&label| g.node_id(label).to_string())
        .collect();

    let mut user_ids: Vec<String> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut weight_to_community: HashMap<u32, u64> = HashMap::new();
    for node in 0..g.num_nodes() as u32 {
        let neighbors = g.neighbors(node);
        if neighbors.is_empty() {
            continue;
        }
        weight_to_community.clear();
        for &(neighbor, weight) in neighbors {
            let community = community_of_label[&labels[neighbor as usize]];
            *weight_to_community.entry(community).or_insert(0) += weight;
        }
        let user = user_ids.len() as u32;
        user_ids.push(g.node_id(node).to_string());
        let mut incident: Vec<(u32, u64)> = weight_to_community
            .iter()
            .map(|(&community, &weight)| (community, weight))
            .collect();
        incident.sort_unstable();
        for (community, weight) in incident {
            edges.push(Edge {
                user,
                community,
                weight,
            });
        }
    }

    Ok(BipartiteGraph::from_parts(community_ids, user_ids, edges))
}
