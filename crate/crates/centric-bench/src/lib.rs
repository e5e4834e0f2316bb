//! Shared fixtures for the pipeline benchmarks.

use centric_core::{bipartite_er, near_star, powerlaw_config, BipartiteGraph};

pub fn er_graph(scale: usize) -> BipartiteGraph {
    bipartite_er(scale, scale * 30, 0.05, 7).expect("valid parameters")
}

pub fn star_graph(scale: usize) -> BipartiteGraph {
    near_star(scale, scale * 20, 7).expect("valid parameters")
}

pub fn powerlaw_graph(scale: usize) -> BipartiteGraph {
    powerlaw_config(scale, scale * 30, 2.5, 7).expect("valid parameters")
}
