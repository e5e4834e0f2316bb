//! Global bottleneck machinery: the second-smallest eigenvalue of the
//! normalized Laplacian over both vertex classes, the Cheeger inequality
//! bounds `lambda2/2 <= h(G) <= sqrt(2 lambda2)`, and an exhaustive
//! conductance search for graphs small enough to enumerate.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Exhaustive subsets become unreasonable past this many vertices.
pub const BRUTE_FORCE_VERTEX_CAP: usize = 24;

const MAX_ITERATIONS: usize = 2_000_000;
const START_VECTOR_SEED: u64 = 0x5eed_cafe;

/// Result of the iterative eigensolve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lambda2 {
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Set when the input was disconnected and the eigenvalue was computed
    /// on the largest component instead.
    pub restricted_to_giant: bool,
}

/// Cheeger number estimate: spectral bounds plus, when enumeration is
/// feasible, the exact value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheegerEstimate {
    pub lambda2: f64,
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<f64>,
    pub restricted_to_giant: bool,
}

/// Undirected weighted graph over both vertex classes; communities come
/// first, then users.
struct VertexGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    edges: Vec<(u32, u32, f64)>,
    covers_whole_graph: bool,
}

impl VertexGraph {
    /// Builds the (possibly giant-component-restricted) vertex graph.
    fn from_bipartite(g: &BipartiteGraph, weighted: bool, restrict_to_giant: bool) -> Self {
        let communities = g.num_communities();
        let users = g.num_users();
        let total = communities + users;

        let mut keep = vec![true; total];
        let mut covers_whole_graph = true;
        if restrict_to_giant {
            let mut dsu = DisjointSets::new(total);
            for edge in g.edges() {
                dsu.union(edge.community, communities as u32 + edge.user);
            }
            let giant = dsu.largest();
            // find any root with the giant size, then keep its members
            let mut root = None;
            for v in 0..total as u32 {
                if dsu.component_size(v) == giant {
                    root = Some(dsu.find(v));
                    break;
                }
            }
            let root = root.expect("non-empty graph has a largest component");
            for v in 0..total as u32 {
                let inside = dsu.find(v) == root;
                keep[v as usize] = inside;
                if !inside {
                    covers_whole_graph = false;
                }
            }
        }

        let mut dense = vec![u32::MAX; total];
        let mut count = 0u32;
        for (v, &kept) in keep.iter().enumerate() {
            if kept {
                dense[v] = count;
                count += 1;
            }
        }

        let mut edges = Vec::new();
        for edge in g.edges() {
            let a = edge.community as usize;
            let b = communities + edge.user as usize;
            if keep[a] && keep[b] {
                let w = if weighted { edge.weight as f64 } else { 1.0 };
                edges.push((dense[a], dense[b], w));
            }
        }

        let n = count as usize;
        let mut degrees = vec![0.0; n];
        let mut counts = vec![0usize; n];
        for &(a, b, w) in &edges {
            degrees[a as usize] += w;
            degrees[b as usize] += w;
            counts[a as usize] += 1;
            counts[b as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + counts[v];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; edges.len() * 2];
        let mut weights = vec![0.0; edges.len() * 2];
        for &(a, b, w) in &edges {
            neighbors[cursor[a as usize]] = b;
            weights[cursor[a as usize]] = w;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            weights[cursor[b as usize]] = w;
            cursor[b as usize] += 1;
        }

        Self {
            offsets,
            neighbors,
            weights,
            degrees,
            edges,
            covers_whole_graph,
        }
    }

    fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    /// `z = (2I - L) x = x + D^{-1/2} A D^{-1/2} x`
    fn apply_shifted(&self, x: &[f64], inv_sqrt_degree: &[f64], z: &mut [f64]) {
        for v in 0..self.vertex_count() {
            let mut acc = 0.0;
            for k in self.offsets[v]..self.offsets[v + 1] {
                let u = self.neighbors[k] as usize;
                acc += self.weights[k] * inv_sqrt_degree[u] * x[u];
            }
            z[v] = x[v] + inv_sqrt_degree[v] * acc;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Second-smallest eigenvalue of `L = I - D^{-1/2} A D^{-1/2}` on the
/// bipartite adjacency over both vertex classes.
///
/// Power iteration runs on the shifted operator `2I - L`, whose dominant
/// eigenvector is the analytically known kernel `D^{1/2} 1`; that vector is
/// deflated every step. Disconnected inputs are restricted to their largest
/// component first, since the full graph's second eigenvalue is a
/// structureless zero.
pub fn lambda2(g: &BipartiteGraph, tolerance: f64, weighted: bool) -> Result<Lambda2> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let graph = VertexGraph::from_bipartite(g, weighted, true);
    let n = graph.vertex_count();
    debug_assert!(n >= 2);

    let inv_sqrt_degree: Vec<f64> = graph.degrees.iter().map(|&d| 1.0 / d.sqrt()).collect();
    let mut kernel: Vec<f64> = graph.degrees.iter().map(|&d| d.sqrt()).collect();
    let kernel_norm = norm(&kernel);
    kernel.iter_mut().for_each(|v| *v /= kernel_norm);

    let mut rng = ChaCha8Rng::seed_from_u64(START_VECTOR_SEED);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let overlap = dot(&x, &kernel);
    x.iter_mut()
        .zip(&kernel)
        .for_each(|(v, &k)| *v -= overlap * k);
    let x_norm = norm(&x);
    if x_norm == 0.0 {
        // single-edge component: the deflated operator is null
        return Ok(Lambda2 {
            value: 2.0,
            iterations: 0,
            residual: 0.0,
            restricted_to_giant: !graph.covers_whole_graph,
        });
    }
    x.iter_mut().for_each(|v| *v /= x_norm);

    let mut z = vec![0.0; n];
    let mut theta = 0.0;
    let mut residual = f64::INFINITY;
    for iteration in 1..=MAX_ITERATIONS {
        graph.apply_shifted(&x, &inv_sqrt_degree, &mut z);
        let overlap = dot(&z, &kernel);
        z.iter_mut()
            .zip(&kernel)
            .for_each(|(v, &k)| *v -= overlap * k);

        theta = dot(&x, &z);
        let mut residual_sq = 0.0;
        for (zi, xi) in z.iter().zip(&x) {
            let r = zi - theta * xi;
            residual_sq += r * r;
        }
        residual = residual_sq.sqrt();
        // operator norm of L is at most 2
        if residual <= tolerance * 2.0 {
            return Ok(Lambda2 {
                value: (2.0 - theta).clamp(0.0, 2.0),
                iterations: iteration,
                residual,
                restricted_to_giant: !graph.covers_whole_graph,
            });
        }

        let z_norm = norm(&z);
        if z_norm == 0.0 {
            // x is numerically a null vector of the shifted operator
            return Ok(Lambda2 {
                value: 2.0,
                iterations: iteration,
                residual: 0.0,
                restricted_to_giant: !graph.covers_whole_graph,
            });
        }
        x.iter_mut().zip(&z).for_each(|(v, &w)| *v = w / z_norm);
    }

    let _ = theta;
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual,
        tolerance,
    })
}

/// Cheeger inequality bounds around the (unknown) Cheeger number, with the
/// exact enumerated value filled in whenever the component is small enough.
pub fn cheeger_bounds(
    g: &BipartiteGraph,
    tolerance: f64,
    weighted: bool,
) -> Result<CheegerEstimate> {
    let eigen = lambda2(g, tolerance, weighted)?;
    let graph = VertexGraph::from_bipartite(g, weighted, true);
    let exact = if graph.vertex_count() <= BRUTE_FORCE_VERTEX_CAP {
        Some(brute_force_on(&graph)?)
    } else {
        None
    };
    Ok(CheegerEstimate {
        lambda2: eigen.value,
        lower: eigen.value / 2.0,
        upper: (2.0 * eigen.value).sqrt(),
        exact,
        restricted_to_giant: eigen.restricted_to_giant,
    })
}

/// Exact Cheeger number by exhaustive enumeration: the minimum over vertex
/// subsets holding at most half the vertices of boundary-crossing edge
/// weight over all edge weight incident to the subset. Only feasible up to
/// [`BRUTE_FORCE_VERTEX_CAP`] vertices.
pub fn brute_force_cheeger(g: &BipartiteGraph, weighted: bool) -> Result<f64> {
    let graph = VertexGraph::from_bipartite(g, weighted, false);
    brute_force_on(&graph)
}

fn brute_force_on(graph: &VertexGraph) -> Result<f64> {
    let n = graph.vertex_count();
    if n > BRUTE_FORCE_VERTEX_CAP {
        return Err(Error::TooLarge {
            vertices: n,
            cap: BRUTE_FORCE_VERTEX_CAP,
        });
    }
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) {
        if 2 * mask.count_ones() as usize > n {
            continue;
        }
        let mut crossing = 0.0;
        let mut incident = 0.0;
        for &(a, b, w) in &graph.edges {
            let a_in = mask >> a & 1 == 1;
            let b_in = mask >> b & 1 == 1;
            if a_in || b_in {
                incident += w;
                if a_in != b_in {
                    crossing += w;
                }
            }
        }
        if incident > 0.0 {
            best = best.min(crossing / incident);
        }
    }
    if best.is_infinite() {
        return Err(Error::EmptyGraph);
    }
    Ok(best)
}
