//! Seeded synthetic bipartite topologies used as reference points for the
//! disruption metric: near-star, preferential attachment, power-law
//! configuration model, bipartite Erdos-Renyi, and a small-world network
//! passed through the unipartite conversion pipeline.
//!
//! All generators emit unit weights and are pure functions of their
//! parameters and seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Edge};
use crate::unipartite::{self, UnipartiteGraph};

/// Default edges per user for the preferential-attachment model, mirroring
/// the near-star's degree-2 users.
pub const DEFAULT_EDGES_PER_USER: usize = 2;

/// Synthetic topology family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "topology", rename_all = "snake_case")]
pub enum Topology {
    NearStar {
        communities: usize,
        users: usize,
    },
    BipartiteBa {
        communities: usize,
        users: usize,
        #[serde(default = "default_edges_per_user")]
        edges_per_user: usize,
    },
    PowerlawConfig {
        communities: usize,
        users: usize,
        gamma: f64,
    },
    BipartiteEr {
        communities: usize,
        users: usize,
        edge_probability: f64,
    },
    BipartiteSmallWorld {
        nodes: usize,
        neighbors: usize,
        rewiring_probability: f64,
    },
}

fn default_edges_per_user() -> usize {
    DEFAULT_EDGES_PER_USER
}

/// A topology plus the seed that makes it reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub topology: Topology,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<BipartiteGraph> {
        match self.topology {
            Topology::NearStar { communities, users } => near_star(communities, users, self.seed),
            Topology::BipartiteBa {
                communities,
                users,
                edges_per_user,
            } => bipartite_ba(communities, users, edges_per_user, self.seed),
            Topology::PowerlawConfig {
                communities,
                users,
                gamma,
            } => powerlaw_config(communities, users, gamma, self.seed),
            Topology::BipartiteEr {
                communities,
                users,
                edge_probability,
            } => bipartite_er(communities, users, edge_probability, self.seed),
            Topology::BipartiteSmallWorld {
                nodes,
                neighbors,
                rewiring_probability,
            } => bipartite_small_world(nodes, neighbors, rewiring_probability, self.seed),
        }
    }
}

fn label_width(count: usize) -> usize {
    count.saturating_sub(1).to_string().len()
}

/// Assembles a graph from provisional edge tuples. All `communities` ids are
/// materialized (including any that drew no users, so curve lengths are a
/// pure function of the parameters); user ids are compacted to the users
/// that actually hold edges, keeping their provisional number in the label.
fn assemble(
    communities: usize,
    user_pool: usize,
    edges: &[(u32, u32)], // (provisional user, community)
) -> BipartiteGraph {
    let community_width = label_width(communities);
    let user_width = label_width(user_pool);
    let community_ids: Vec<String> = (0..communities)
        .map(|c| format!("c{c:0community_width$}"))
        .collect();

    let mut dense_of_user: Vec<u32> = vec![u32::MAX; user_pool];
    let mut user_ids: Vec<String> = Vec::new();
    let mut dense_edges: Vec<Edge> = Vec::with_capacity(edges.len());
    for &(user, community) in edges {
        let slot = &mut dense_of_user[user as usize];
        if *slot == u32::MAX {
            *slot = user_ids.len() as u32;
            user_ids.push(format!("u{user:0user_width$}"));
        }
        dense_edges.push(Edge {
            user: *slot,
            community,
            weight: 1,
        });
    }

    BipartiteGraph::from_parts(community_ids, user_ids, dense_edges)
}

/// Bipartite near-star: every user holds exactly two unit edges, one to the
/// hub (community 0) and one to a uniformly chosen leaf.
pub fn near_star(communities: usize, users: usize, seed: u64) -> Result<BipartiteGraph> {
    if communities < 2 {
        return Err(Error::InvalidParameter(format!(
            "near-star needs at least 2 communities, got {communities}"
        )));
    }
    if users < 1 {
        return Err(Error::InvalidParameter("near-star needs users".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(2 * users);
    for user in 0..users as u32 {
        let leaf = rng.random_range(1..communities as u32);
        edges.push((user, 0));
        edges.push((user, leaf));
    }
    Ok(assemble(communities, users, &edges))
}

/// Bipartite preferential attachment: communities start empty and each
/// arriving user picks `edges_per_user` distinct communities with
/// probability proportional to current size plus one.
pub fn bipartite_ba(
    communities: usize,
    users: usize,
    edges_per_user: usize,
    seed: u64,
) -> Result<BipartiteGraph> {
    if edges_per_user < 1 || communities < edges_per_user {
        return Err(Error::InvalidParameter(format!(
            "need communities >= edges_per_user >= 1, got {communities} and {edges_per_user}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Urn sampling: one ticket per community up front (the "+1"), one more
    // per member gained, so a uniform ticket draw realizes size-plus-one
    // preferential attachment in constant time.
    let mut urn: Vec<u32> = (0..communities as u32).collect();
    let mut edges = Vec::with_capacity(users * edges_per_user);
    let mut chosen: Vec<u32> = Vec::with_capacity(edges_per_user);

    for user in 0..users as u32 {
        chosen.clear();
        while chosen.len() < edges_per_user {
            let pick = urn[rng.random_range(0..urn.len())];
            if !chosen.contains(&pick) {
                chosen.push(pick);
                edges.push((user, pick));
            }
        }
        urn.extend_from_slice(&chosen);
    }
    Ok(assemble(communities, users, &edges))
}

/// Bipartite configuration model with power-law community degrees.
///
/// Degrees are drawn by inverse CDF from `P(x) ~ x^-gamma` on `1..=users`
/// (the cap keeps without-replacement wiring feasible); each community is
/// then wired to that many distinct users chosen uniformly.
pub fn powerlaw_config(
    communities: usize,
    users: usize,
    gamma: f64,
    seed: u64,
) -> Result<BipartiteGraph> {
    if gamma <= 1.0 || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "power-law exponent must be > 1, got {gamma}"
        )));
    }
    if communities < 1 || users < 1 {
        return Err(Error::InvalidParameter(
            "power-law model needs communities and users".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut cdf = Vec::with_capacity(users);
    let mut acc = 0.0f64;
    for x in 1..=users {
        acc += (x as f64).powf(-gamma);
        cdf.push(acc);
    }
    let norm = acc;

    let mut edges = Vec::new();
    let mut members: HashSet<u32> = HashSet::new();
    let mut shuffle_pool: Vec<u32> = Vec::new();
    for community in 0..communities as u32 {
        let ticket = rng.random::<f64>() * norm;
        let degree = cdf.partition_point(|&c| c < ticket) + 1;
        let degree = degree.min(users);

        if degree * 2 <= users {
            members.clear();
            while members.len() < degree {
                let user = rng.random_range(0..users as u32);
                if members.insert(user) {
                    edges.push((user, community));
                }
            }
        } else {
            // dense draw: partial Fisher-Yates over the whole pool
            shuffle_pool.clear();
            shuffle_pool.extend(0..users as u32);
            for slot in 0..degree {
                let other = rng.random_range(slot..users);
                shuffle_pool.swap(slot, other);
                edges.push((shuffle_pool[slot], community));
            }
        }
    }
    Ok(assemble(communities, users, &edges))
}

/// Bipartite Erdos-Renyi: each of the `communities x users` unit edges
/// exists independently with probability `p`. Skips between edges are drawn
/// geometrically, so the cost scales with the output.
pub fn bipartite_er(communities: usize, users: usize, p: f64, seed: u64) -> Result<BipartiteGraph> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must be in (0, 1], got {p}"
        )));
    }
    if communities < 1 || users < 1 {
        return Err(Error::InvalidParameter(
            "Erdos-Renyi model needs communities and users".into(),
        ));
    }
    let total_cells = communities as u64 * users as u64;
    let mut edges = Vec::new();

    if p >= 1.0 {
        for cell in 0..total_cells {
            edges.push(((cell % users as u64) as u32, (cell / users as u64) as u32));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let skips = Geometric::new(p).expect("validated probability");
        let mut cell = skips.sample(&mut rng);
        while cell < total_cells {
            edges.push(((cell % users as u64) as u32, (cell / users as u64) as u32));
            cell = match cell.checked_add(1 + skips.sample(&mut rng)) {
                Some(next) => next,
                None => break,
            };
        }
    }
    Ok(assemble(communities, users, &edges))
}

/// Watts-Strogatz ring lattice with probabilistic rewiring, converted to
/// bipartite form with label propagation plus projection.
///
/// A degenerate single-community detection is not an error; callers can
/// inspect `num_communities()` on the result.
pub fn bipartite_small_world(
    nodes: usize,
    neighbors: usize,
    p: f64,
    seed: u64,
) -> Result<BipartiteGraph> {
    if neighbors < 2 || nodes <= neighbors {
        return Err(Error::InvalidParameter(format!(
            "small-world needs nodes > neighbors >= 2, got {nodes} and {neighbors}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "rewiring probability must be in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = neighbors / 2;

    let mut edge_set: HashSet<(u32, u32)> = HashSet::new();
    let key = |a: u32, b: u32| (a.min(b), a.max(b));
    let mut ring: Vec<(u32, u32)> = Vec::with_capacity(nodes * half);
    for node in 0..nodes as u32 {
        for offset in 1..=half as u32 {
            let target = (node + offset) % nodes as u32;
            ring.push((node, target));
            edge_set.insert(key(node, target));
        }
    }

    let mut edges: Vec<(u32, u32, u64)> = Vec::with_capacity(ring.len());
    for &(source, target) in &ring {
        let mut final_target = target;
        if rng.random::<f64>() < p {
            // bounded retries; a saturated source keeps its ring edge
            for _ in 0..32 {
                let candidate = rng.random_range(0..nodes as u32);
                if candidate != source && !edge_set.contains(&key(source, candidate)) {
                    edge_set.remove(&key(source, target));
                    edge_set.insert(key(source, candidate));
                    final_target = candidate;
                    break;
                }
            }
        }
        edges.push((source, final_target, 1));
    }

    let width = label_width(nodes);
    let node_ids: Vec<String> = (0..nodes).map(|n| format!("n{n:0width$}")).collect();
    let unipartite = UnipartiteGraph::from_parts(node_ids, &edges);
    let lpa_seed = rng.random::<u64>();
    let assignment =
        unipartite::label_propagation(&unipartite, lpa_seed, unipartite::DEFAULT_MAX_ROUNDS);
    unipartite::project_to_bipartite(&unipartite, &assignment.labels)
}
