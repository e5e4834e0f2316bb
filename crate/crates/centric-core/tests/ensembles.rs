//! Seeded ensemble checks of the generators' statistical behavior and the
//! finite-sample convergence of the analytic predictions. Everything runs
//! over fixed seed ranges, so these are deterministic regressions rather
//! than flaky statistical tests.

use std::collections::HashMap;

use centric_core::*;

fn median(mut values: Vec<u64>) -> f64 {
    values.sort_unstable();
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
    }
}

fn community_sizes(g: &BipartiteGraph) -> Vec<u64> {
    (0..g.num_communities() as u32)
        .map(|c| g.community_unique_degree(c))
        .collect()
}

#[test]
fn near_star_leaf_occupancy_is_uniform() {
    // pooled leaf counts over 100 seeds against the uniform expectation;
    // chi-square with 28 degrees of freedom should sit near its mean
    let (communities, users, seeds) = (30usize, 3000usize, 100u64);
    let mut counts = vec![0u64; communities];
    for seed in 0..seeds {
        let g = near_star(communities, users, seed).unwrap();
        for c in 1..communities as u32 {
            counts[c as usize] += g.community_unique_degree(c);
        }
    }
    let expected = seeds as f64 * users as f64 / (communities - 1) as f64;
    let chi_square: f64 = counts[1..]
        .iter()
        .map(|&observed| (observed as f64 - expected).powi(2) / expected)
        .sum();
    let degrees_of_freedom = (communities - 2) as f64;
    assert!(
        chi_square < degrees_of_freedom + 4.0 * (2.0 * degrees_of_freedom).sqrt(),
        "chi-square {chi_square} too large for df {degrees_of_freedom}"
    );
}

#[test]
fn near_star_steps_to_half_at_the_first_removal_for_every_seed() {
    for seed in 0..100u64 {
        let g = near_star(150, 3000, seed).unwrap();
        let plan = g.removal_plan(RankingKey::UniqueUsers);
        let curve = disruption_curve(&g, &plan, true).unwrap();
        assert_eq!(curve.disruptions()[0], 0.5, "seed {seed}");
    }
}

#[test]
fn preferential_attachment_sizes_are_right_skewed() {
    for seed in 0..100u64 {
        let g = bipartite_ba(300, 10_000, 2, seed).unwrap();
        let sizes = community_sizes(&g);
        let ratio = *sizes.iter().max().unwrap() as f64 / median(sizes);
        assert!(ratio > 5.0, "seed {seed}: max/median = {ratio:.2}");
    }
}

#[test]
fn powerlaw_ccdf_slope_matches_the_exponent() {
    // pooled community degrees over 100 seeds; the log-log CCDF slope of a
    // gamma = 2.5 configuration model is 1 - gamma = -1.5
    let mut histogram: std::collections::BTreeMap<u64, u64> = std::collections::BTreeMap::new();
    let mut total = 0u64;
    for seed in 0..100u64 {
        let g = powerlaw_config(1000, 50_000, 2.5, seed).unwrap();
        for size in community_sizes(&g) {
            *histogram.entry(size).or_insert(0) += 1;
            total += 1;
        }
    }
    let mut points = Vec::new();
    let mut at_least = total as f64;
    for (&degree, &count) in &histogram {
        if at_least >= 10.0 {
            points.push(((degree as f64).ln(), (at_least / total as f64).ln()));
        }
        at_least -= count as f64;
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(
        (slope - (-1.5)).abs() < 0.2,
        "fitted CCDF slope {slope:.3}, expected -1.5 +- 0.2"
    );
}

#[test]
fn small_world_sizes_are_more_uniform_than_powerlaw() {
    let seeds = 100u64;
    let mut small_world_dispersion = 0.0;
    let mut powerlaw_dispersion = 0.0;
    for seed in 0..seeds {
        let sw = bipartite_small_world(300, 5, 0.05, seed).unwrap();
        let sizes = community_sizes(&sw);
        small_world_dispersion += *sizes.iter().max().unwrap() as f64 / median(sizes.clone());

        let pl = powerlaw_config(sizes.len().max(2), 300, 2.5, seed).unwrap();
        let pl_sizes = community_sizes(&pl);
        powerlaw_dispersion += *pl_sizes.iter().max().unwrap() as f64 / median(pl_sizes);
    }
    small_world_dispersion /= seeds as f64;
    powerlaw_dispersion /= seeds as f64;
    assert!(
        small_world_dispersion < powerlaw_dispersion,
        "small-world {small_world_dispersion:.2} should disperse less than powerlaw {powerlaw_dispersion:.2}"
    );
}

/// Reference marginals behind the correlated-ensemble experiment: an
/// Erdos-Renyi-like bipartite network with 30 users per community and
/// binomially distributed memberships averaging 1.2.
fn reference_marginals(communities: usize) -> (Vec<f64>, Vec<f64>) {
    let users = 30 * communities;
    let q = 1.2 / communities as f64;
    let p_n = zero_truncated(&truncated_binomial(users, q, 1e-9).unwrap()).unwrap();
    let g_m = truncated_binomial(communities, q, 1e-9).unwrap();
    (p_n, g_m)
}

/// Mean absolute gap between the analytic curve and per-class empirical
/// means, over classes realized in every replicate.
fn mean_absolute_gap(communities: usize, seeds: std::ops::Range<u64>) -> f64 {
    let (p_n, g_m) = reference_marginals(communities);
    let model = random_joint(&p_n, &g_m).unwrap();
    let predicted: HashMap<usize, f64> = analytic_disruption(&model)
        .unwrap()
        .iter()
        .filter(|p| !p.denominator_zero)
        .map(|p| (p.size, p.disruption))
        .collect();

    let runs = seeds.end - seeds.start;
    let mut samples: HashMap<usize, Vec<f64>> = HashMap::new();
    for seed in seeds {
        let g = sample_finite_network(&model, communities, seed).unwrap();
        for point in size_class_disruption(&g) {
            if point.defined {
                samples
                    .entry(point.size)
                    .or_default()
                    .push(point.disruption);
            }
        }
    }

    let mut gap = 0.0;
    let mut classes = 0usize;
    for (&size, values) in &samples {
        if values.len() < runs as usize {
            continue;
        }
        let Some(&pred) = predicted.get(&size) else {
            continue;
        };
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        gap += (mean - pred).abs();
        classes += 1;
    }
    assert!(classes > 10, "need a populated class set, got {classes}");
    gap / classes as f64
}

#[test]
fn finite_samples_converge_toward_the_analytic_curve() {
    let coarse = mean_absolute_gap(1_000, 0..20);
    let fine = mean_absolute_gap(10_000, 0..20);
    assert!(
        fine < coarse,
        "gap should shrink with size: C=1e3 gives {coarse:.5}, C=1e4 gives {fine:.5}"
    );
}
