//! In-memory representation of a weighted bipartite user-community graph.
//!
//! Communities and users get dense indexes in first-seen order; external
//! string identifiers are kept alongside. Duplicate (user, community) pairs
//! are compressed by summing their weights at construction time, and every
//! graph carries the degree indexes the metric sweeps need.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense community index, assigned in first-seen order.
pub type CommunityIndex = u32;
/// Dense user index, assigned in first-seen order.
pub type UserIndex = u32;

/// A single weighted edge between a user and a community.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub user: UserIndex,
    pub community: CommunityIndex,
    pub weight: u64,
}

/// Raw input record before index assignment and duplicate compression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub user: String,
    pub community: String,
    pub weight: i64,
}

impl EdgeRecord {
    pub fn new(user: impl Into<String>, community: impl Into<String>, weight: i64) -> Self {
        Self {
            user: user.into(),
            community: community.into(),
            weight,
        }
    }
}

/// Key used to order communities for removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingKey {
    /// Number of distinct users in the community (default).
    #[default]
    UniqueUsers,
    /// Sum of incident edge weights.
    WeightedDegree,
}

/// Deterministic largest-first community removal order.
///
/// Ties on the ranking key are broken by ascending external community
/// identifier, so the order is a pure function of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalPlan {
    order: Vec<CommunityIndex>,
    key: RankingKey,
}

impl RemovalPlan {
    pub fn order(&self) -> &[CommunityIndex] {
        &self.order
    }

    pub fn key(&self) -> RankingKey {
        self.key
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Immutable weighted bipartite graph with degree indexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    community_ids: Vec<String>,
    user_ids: Vec<String>,
    edges: Vec<Edge>,
    community_unique_degree: Vec<u64>,
    community_weighted_degree: Vec<u64>,
    user_adjacency: Vec<Vec<(CommunityIndex, u64)>>,
    total_weight: u64,
}

impl BipartiteGraph {
    /// Builds a graph from raw records, merging duplicate (user, community)
    /// pairs by summing weights. Indexes are assigned in first-seen order.
    pub fn from_records<'a, I>(records: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a EdgeRecord>,
    {
        let mut community_ids: Vec<String> = Vec::new();
        let mut user_ids: Vec<String> = Vec::new();
        let mut community_index: HashMap<String, CommunityIndex> = HashMap::new();
        let mut user_index: HashMap<String, UserIndex> = HashMap::new();
        let mut edge_slot: HashMap<(UserIndex, CommunityIndex), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();

        for (position, record) in records.into_iter().enumerate() {
            if record.weight < 1 {
                return Err(Error::InvalidWeight {
                    position,
                    weight: record.weight,
                });
            }
            if record.user.is_empty() {
                return Err(Error::EmptyIdentifier {
                    position,
                    field: "user",
                });
            }
            if record.community.is_empty() {
                return Err(Error::EmptyIdentifier {
                    position,
                    field: "community",
                });
            }

            let user = *user_index.entry(record.user.clone()).or_insert_with(|| {
                user_ids.push(record.user.clone());
                (user_ids.len() - 1) as UserIndex
            });
            let community = *community_index
                .entry(record.community.clone())
                .or_insert_with(|| {
                    community_ids.push(record.community.clone());
                    (community_ids.len() - 1) as CommunityIndex
                });

            match edge_slot.entry((user, community)) {
                std::collections::hash_map::Entry::Occupied(slot) => {
                    edges[*slot.get()].weight += record.weight as u64;
                }
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(edges.len());
                    edges.push(Edge {
                        user,
                        community,
                        weight: record.weight as u64,
                    });
                }
            }
        }

        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }

        Ok(Self::from_parts(community_ids, user_ids, edges))
    }

    /// Assembles a graph from already-deduplicated dense parts. Used by
    /// generators and rewiring, which control their own index spaces.
    pub(crate) fn from_parts(
        community_ids: Vec<String>,
        user_ids: Vec<String>,
        edges: Vec<Edge>,
    ) -> Self {
        let mut community_unique_degree = vec![0u64; community_ids.len()];
        let mut community_weighted_degree = vec![0u64; community_ids.len()];
        let mut user_adjacency: Vec<Vec<(CommunityIndex, u64)>> = vec![Vec::new(); user_ids.len()];
        let mut total_weight = 0u64;

        for edge in &edges {
            community_unique_degree[edge.community as usize] += 1;
            community_weighted_degree[edge.community as usize] += edge.weight;
            user_adjacency[edge.user as usize].push((edge.community, edge.weight));
            total_weight += edge.weight;
        }

        let membership_total: u64 = user_adjacency.iter().map(|a| a.len() as u64).sum();
        let unique_total: u64 = community_unique_degree.iter().sum();
        assert_eq!(
            unique_total,
            edges.len() as u64,
            "community unique degrees must sum to the distinct edge count"
        );
        assert_eq!(
            membership_total,
            edges.len() as u64,
            "user memberships must sum to the distinct edge count"
        );

        Self {
            community_ids,
            user_ids,
            edges,
            community_unique_degree,
            community_weighted_degree,
            user_adjacency,
            total_weight,
        }
    }

    pub fn num_communities(&self) -> usize {
        self.community_ids.len()
    }

    pub fn num_users(&self) -> usize {
        self.user_ids.len()
    }

    /// Number of distinct (user, community) edges after compression.
    pub fn distinct_edges(&self) -> usize {
        self.edges.len()
    }

    /// Total edge weight across the graph.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn community_id(&self, index: CommunityIndex) -> &str {
        &self.community_ids[index as usize]
    }

    pub fn user_id(&self, index: UserIndex) -> &str {
        &self.user_ids[index as usize]
    }

    pub fn community_ids(&self) -> &[String] {
        &self.community_ids
    }

    pub fn user_ids(&self) -> &[String] {
        &self.user_ids
    }

    /// Distinct adjacent users of a community.
    pub fn community_unique_degree(&self, index: CommunityIndex) -> u64 {
        self.community_unique_degree[index as usize]
    }

    /// Sum of incident edge weights of a community.
    pub fn community_weighted_degree(&self, index: CommunityIndex) -> u64 {
        self.community_weighted_degree[index as usize]
    }

    /// Communities adjacent to a user, with edge weights.
    pub fn user_adjacency(&self, index: UserIndex) -> &[(CommunityIndex, u64)] {
        &self.user_adjacency[index as usize]
    }

    pub fn user_unique_degree(&self, index: UserIndex) -> u64 {
        self.user_adjacency[index as usize].len() as u64
    }

    pub fn user_weighted_degree(&self, index: UserIndex) -> u64 {
        self.user_adjacency[index as usize]
            .iter()
            .map(|(_, w)| *w)
            .sum()
    }

    /// Community degree under the given ranking key.
    pub fn community_degree(&self, index: CommunityIndex, key: RankingKey) -> u64 {
        match key {
            RankingKey::UniqueUsers => self.community_unique_degree(index),
            RankingKey::WeightedDegree => self.community_weighted_degree(index),
        }
    }

    /// Largest-first removal order under the ranking key, ties broken by
    /// ascending external community identifier.
    pub fn removal_plan(&self, key: RankingKey) -> RemovalPlan {
        let mut order: Vec<CommunityIndex> = (0..self.num_communities() as u32).collect();
        order.sort_by(|&a, &b| {
            self.community_degree(b, key)
                .cmp(&self.community_degree(a, key))
                .then_with(|| self.community_id(a).cmp(self.community_id(b)))
        });
        RemovalPlan { order, key }
    }

    /// For each user, the plan position at which its last community is
    /// removed. A user survives the removal of the first `k` communities
    /// exactly when its rank is `>= k`, which lets every curve run as one
    /// sorted sweep instead of per-step graph mutation.
    pub fn smallest_community_rank(&self, plan: &RemovalPlan) -> Result<Vec<u32>> {
        let position = self.plan_positions(plan)?;
        Ok(self
            .user_adjacency
            .iter()
            .map(|adjacency| {
                adjacency
                    .iter()
                    .map(|(community, _)| position[*community as usize])
                    .max()
                    .expect("users have at least one edge by construction")
            })
            .collect())
    }

    /// Validates that `plan` is a permutation of this graph's communities and
    /// returns the position of each community in the removal order.
    pub(crate) fn plan_positions(&self, plan: &RemovalPlan) -> Result<Vec<u32>> {
        if plan.len() != self.num_communities() {
            return Err(Error::PlanMismatch {
                reason: format!(
                    "plan orders {} communities, graph has {}",
                    plan.len(),
                    self.num_communities()
                ),
            });
        }
        let mut position = vec![u32::MAX; self.num_communities()];
        for (step, &community) in plan.order().iter().enumerate() {
            let slot = position
                .get_mut(community as usize)
                .ok_or_else(|| Error::PlanMismatch {
                    reason: format!("community index {community} out of range"),
                })?;
            if *slot != u32::MAX {
                return Err(Error::PlanMismatch {
                    reason: format!("community index {community} appears twice"),
                });
            }
            *slot = step as u32;
        }
        Ok(position)
    }

    /// Edge list in a serialization-stable order (by dense index pair).
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut edges = self.edges.clone();
        edges.sort_by_key(|e| (e.community, e.user));
        edges
    }
}
