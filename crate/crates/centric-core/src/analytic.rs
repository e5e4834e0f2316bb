//! Closed-form disruption for infinite random bipartite ensembles.
//!
//! A model fixes the community-size distribution `p_n`, the per-user
//! membership distribution `g_m`, and the joint matrix `P[n][m]` giving the
//! classes at the ends of a uniformly random edge. From these, the expected
//! per-size-class disruption of largest-first pruning has a closed form:
//!
//! ```text
//! u(n) = sum_m P[n][m]/row(n) * ( sum_{n' >= n} P[n'][m] / col(m) )^(m-1)
//! D(n) = (n p_n - u(n) n p_n) / ( sum_{n' <= n} n' p_n' - u(n) n p_n )
//! ```
//!
//! `u(n)` is the chance that a random member of a size-`n` community holds
//! no smaller community and is therefore pruned along with it. The module
//! also builds maximally (dis)assortative couplings of the same marginals,
//! interpolates between them, and samples finite graphs from a model so the
//! predictions can be checked against the empirical metric.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Edge};

const DISTRIBUTION_SUM_TOLERANCE: f64 = 1e-12;
const MARGINAL_TOLERANCE: f64 = 1e-9;

/// Joint degree model over community sizes `n` and user memberships `m`.
/// Vectors are dense and indexed by the degree value itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDegreeModel {
    p_n: Vec<f64>,
    g_m: Vec<f64>,
    p_nm: Vec<Vec<f64>>,
}

/// Which extreme coupling to move toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    TowardMax,
    TowardMin,
}

/// Interpolation strength and direction; `rho = 0` reproduces the random
/// matrix exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSetting {
    pub rho: f64,
    pub direction: Coupling,
}

/// One point of the analytic pruning curve, largest sizes first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticPoint {
    pub size: usize,
    pub disruption: f64,
    /// Set when the denominator vanished (an empty remaining-edge set); the
    /// disruption is reported as zero.
    pub denominator_zero: bool,
}

/// Relative disruption difference of a correlated model against the random
/// one, per size class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeDifferencePoint {
    pub size: usize,
    pub relative_difference: f64,
    /// Cleared when the random model's disruption is zero at this size.
    pub defined: bool,
}

/// Empirical analogue of [`AnalyticPoint`] measured on a finite graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeClassPoint {
    pub size: usize,
    pub disruption: f64,
    pub defined: bool,
}

fn cleaned_distribution(raw: &[f64], name: &str) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(Error::InvalidDistribution(format!("{name} is empty")));
    }
    let mut sum = 0.0;
    for &value in raw {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "{name} has a negative or non-finite entry"
            )));
        }
        sum += value;
    }
    if sum <= 0.0 {
        return Err(Error::InvalidDistribution(format!("{name} sums to zero")));
    }
    Ok(raw.iter().map(|v| v / sum).collect())
}

/// Edge-mass marginal `k * dist[k]`, normalized.
fn edge_mass(dist: &[f64], name: &str) -> Result<Vec<f64>> {
    let mut mass: Vec<f64> = dist
        .iter()
        .enumerate()
        .map(|(k, &p)| k as f64 * p)
        .collect();
    let total: f64 = mass.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidDistribution(format!(
            "{name} carries no edge mass (all weight at zero)"
        )));
    }
    for value in &mut mass {
        *value /= total;
    }
    Ok(mass)
}

impl JointDegreeModel {
    fn new(p_n: Vec<f64>, g_m: Vec<f64>, p_nm: Vec<Vec<f64>>) -> Self {
        Self { p_n, g_m, p_nm }
    }

    pub fn p_n(&self) -> &[f64] {
        &self.p_n
    }

    pub fn g_m(&self) -> &[f64] {
        &self.g_m
    }

    pub fn p_nm(&self) -> &[Vec<f64>] {
        &self.p_nm
    }

    /// Community sizes with positive probability, ascending.
    pub fn size_support(&self) -> Vec<usize> {
        self.p_n
            .iter()
            .enumerate()
            .filter(|&(n, &p)| n >= 1 && p > 0.0)
            .map(|(n, _)| n)
            .collect()
    }

    /// Membership counts with positive probability, ascending.
    pub fn membership_support(&self) -> Vec<usize> {
        self.g_m
            .iter()
            .enumerate()
            .filter(|&(m, &p)| m >= 1 && p > 0.0)
            .map(|(m, _)| m)
            .collect()
    }

    /// Pearson correlation of the two classes at a random edge.
    pub fn joint_degree_correlation(&self) -> f64 {
        let mut mean_n = 0.0;
        let mut mean_m = 0.0;
        for (n, row) in self.p_nm.iter().enumerate() {
            for (m, &p) in row.iter().enumerate() {
                mean_n += n as f64 * p;
                mean_m += m as f64 * p;
            }
        }
        let mut var_n = 0.0;
        let mut var_m = 0.0;
        let mut cov = 0.0;
        for (n, row) in self.p_nm.iter().enumerate() {
            for (m, &p) in row.iter().enumerate() {
                let dn = n as f64 - mean_n;
                let dm = m as f64 - mean_m;
                var_n += dn * dn * p;
                var_m += dm * dm * p;
                cov += dn * dm * p;
            }
        }
        if var_n <= 0.0 || var_m <= 0.0 {
            0.0
        } else {
            cov / (var_n * var_m).sqrt()
        }
    }

    /// Checks normalization and the edge-weighted marginal identities.
    pub fn validate(&self) -> Result<()> {
        let sum_p: f64 = self.p_n.iter().sum();
        let sum_g: f64 = self.g_m.iter().sum();
        let sum_joint: f64 = self.p_nm.iter().flatten().sum();
        for (label, sum) in [("p_n", sum_p), ("g_m", sum_g), ("P_nm", sum_joint)] {
            if (sum - 1.0).abs() > DISTRIBUTION_SUM_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "{label} sums to {sum}, expected 1"
                )));
            }
        }
        if self.p_n[0] != 0.0 {
            return Err(Error::InvalidDistribution(
                "p_n assigns probability to size 0".into(),
            ));
        }
        let a = edge_mass(&self.p_n, "p_n")?;
        let b = edge_mass(&self.g_m, "g_m")?;
        for (n, row) in self.p_nm.iter().enumerate() {
            let row_sum: f64 = row.iter().sum();
            if (row_sum - a[n]).abs() > MARGINAL_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "community marginal mismatch at size {n}: {row_sum} vs {}",
                    a[n]
                )));
            }
        }
        for m in 0..self.g_m.len() {
            let col_sum: f64 = self.p_nm.iter().map(|row| row[m]).sum();
            if (col_sum - b[m]).abs() > MARGINAL_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "user marginal mismatch at membership {m}: {col_sum} vs {}",
                    b[m]
                )));
            }
        }
        Ok(())
    }
}

/// Uncorrelated joint matrix: the outer product of the edge-weighted
/// marginals, `P[n][m] ~ n p_n m g_m`.
pub fn random_joint(p_n: &[f64], g_m: &[f64]) -> Result<JointDegreeModel> {
    let p_n = cleaned_distribution(p_n, "p_n")?;
    let g_m = cleaned_distribution(g_m, "g_m")?;
    if p_n[0] > 0.0 {
        return Err(Error::InvalidDistribution(
            "p_n assigns probability to size 0".into(),
        ));
    }
    let a = edge_mass(&p_n, "p_n")?;
    let b = edge_mass(&g_m, "g_m")?;
    let p_nm: Vec<Vec<f64>> = a
        .iter()
        .map(|&an| b.iter().map(|&bm| an * bm).collect())
        .collect();
    Ok(JointDegreeModel::new(p_n, g_m, p_nm))
}

/// Extremal coupling of the same marginals: pair community edge mass,
/// largest sizes first, against user edge mass sorted by membership
/// descending (max) or ascending (min), transferring the smaller remaining
/// mass at each step. This is the monotone coupling, the distributional
/// analogue of assigning the highest-degree users to the largest
/// communities.
pub fn extreme_joint(p_n: &[f64], g_m: &[f64], which: Coupling) -> Result<JointDegreeModel> {
    let p_n = cleaned_distribution(p_n, "p_n")?;
    let g_m = cleaned_distribution(g_m, "g_m")?;
    if p_n[0] > 0.0 {
        return Err(Error::InvalidDistribution(
            "p_n assigns probability to size 0".into(),
        ));
    }
    let a = edge_mass(&p_n, "p_n")?;
    let b = edge_mass(&g_m, "g_m")?;

    let sizes_desc: Vec<usize> = (0..a.len()).rev().filter(|&n| a[n] > 0.0).collect();
    let mut memberships: Vec<usize> = (0..b.len()).filter(|&m| b[m] > 0.0).collect();
    if matches!(which, Coupling::TowardMax) {
        memberships.reverse();
    }

    let mut p_nm = vec![vec![0.0; b.len()]; a.len()];
    let mut m_cursor = 0usize;
    let mut m_remaining = memberships.first().map(|&m| b[m]).unwrap_or(0.0);
    for &n in &sizes_desc {
        let mut n_remaining = a[n];
        while n_remaining > 0.0 && m_cursor < memberships.len() {
            let m = memberships[m_cursor];
            let transfer = n_remaining.min(m_remaining);
            p_nm[n][m] += transfer;
            n_remaining -= transfer;
            m_remaining -= transfer;
            if m_remaining <= f64::EPSILON * b[m] {
                m_cursor += 1;
                m_remaining = memberships
                    .get(m_cursor)
                    .map(|&next| b[next])
                    .unwrap_or(0.0);
            }
        }
    }
    Ok(JointDegreeModel::new(p_n, g_m, p_nm))
}

/// Convex interpolation `(1 - rho) * random + rho * extreme` over the same
/// marginals. `rho = 0` returns the random model bit-identically.
pub fn correlated_joint(
    p_n: &[f64],
    g_m: &[f64],
    setting: CorrelationSetting,
) -> Result<JointDegreeModel> {
    if !(0.0..=1.0).contains(&setting.rho) {
        return Err(Error::InvalidParameter(format!(
            "rho must be in [0, 1], got {}",
            setting.rho
        )));
    }
    let random = random_joint(p_n, g_m)?;
    if setting.rho == 0.0 {
        return Ok(random);
    }
    let extreme = extreme_joint(p_n, g_m, setting.direction)?;
    let rho = setting.rho;
    let p_nm: Vec<Vec<f64>> = random
        .p_nm
        .iter()
        .zip(extreme.p_nm.iter())
        .map(|(r_row, e_row)| {
            r_row
                .iter()
                .zip(e_row.iter())
                .map(|(&r, &e)| (1.0 - rho) * r + rho * e)
                .collect()
        })
        .collect();
    Ok(JointDegreeModel::new(random.p_n, random.g_m, p_nm))
}

/// Probability that a random member of a size-`n` community has no smaller
/// community, and is therefore pruned together with it under largest-first
/// removal.
pub fn u_n(model: &JointDegreeModel, n: usize) -> Result<f64> {
    if n >= model.p_n.len() || n < 1 || model.p_n[n] <= 0.0 {
        return Err(Error::OutsideSupport(n));
    }
    let row = &model.p_nm[n];
    let row_sum: f64 = row.iter().sum();
    if row_sum <= 0.0 {
        return Err(Error::OutsideSupport(n));
    }

    let memberships = model.g_m.len();
    let mut value = 0.0;
    for m in 1..memberships {
        let cell = row[m];
        if cell <= 0.0 {
            continue;
        }
        let column_sum: f64 = model.p_nm.iter().map(|r| r[m]).sum();
        if column_sum <= 0.0 {
            continue;
        }
        let at_least_n: f64 = model.p_nm[n..].iter().map(|r| r[m]).sum();
        let ratio = at_least_n / column_sum;
        value += cell / row_sum * ratio.powi(m as i32 - 1);
    }
    Ok(value)
}

/// Closed-form disruption per size class, evaluated in largest-first
/// pruning order. Zero numerators yield zero; vanished denominators are
/// flagged rather than skipped.
pub fn analytic_disruption(model: &JointDegreeModel) -> Result<Vec<AnalyticPoint>> {
    let support = model.size_support();
    if support.is_empty() {
        return Err(Error::InvalidDistribution("p_n has empty support".into()));
    }

    let mut acc = 0.0;
    let cumulative: Vec<f64> = model
        .p_n
        .iter()
        .enumerate()
        .map(|(n, &p)| {
            acc += n as f64 * p;
            acc
        })
        .collect();

    let mut points = Vec::with_capacity(support.len());
    for &n in support.iter().rev() {
        let u = u_n(model, n)?;
        let edge_share = n as f64 * model.p_n[n];
        let numerator = edge_share * (1.0 - u);
        let denominator = cumulative[n] - edge_share * u;
        let denominator_zero = denominator.abs() < 1e-15;
        let disruption = if numerator <= 0.0 || denominator_zero {
            0.0
        } else {
            numerator / denominator
        };
        points.push(AnalyticPoint {
            size: n,
            disruption,
            denominator_zero,
        });
    }
    Ok(points)
}

/// Disruption of the `rho`-correlated model relative to the random one:
/// `D_corr(n) / D_rand(n) - 1` per size class, flagged undefined where the
/// random disruption vanishes.
pub fn correlation_experiment(
    p_n: &[f64],
    g_m: &[f64],
    setting: CorrelationSetting,
) -> Result<Vec<RelativeDifferencePoint>> {
    let random = random_joint(p_n, g_m)?;
    let correlated = correlated_joint(p_n, g_m, setting)?;
    let base = analytic_disruption(&random)?;
    let shifted = analytic_disruption(&correlated)?;

    Ok(base
        .iter()
        .zip(shifted.iter())
        .map(|(b, s)| {
            debug_assert_eq!(b.size, s.size);
            if b.disruption > 0.0 {
                RelativeDifferencePoint {
                    size: b.size,
                    relative_difference: s.disruption / b.disruption - 1.0,
                    defined: true,
                }
            } else {
                RelativeDifferencePoint {
                    size: b.size,
                    relative_difference: 0.0,
                    defined: false,
                }
            }
        })
        .collect())
}

fn sample_index(cdf: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = *cdf.last().expect("non-empty cdf");
    let ticket = rng.random::<f64>() * total;
    cdf.partition_point(|&c| c <= ticket).min(cdf.len() - 1)
}

/// Draws a finite bipartite graph whose community sizes follow `p_n`
/// exactly and whose edges pair size and membership classes according to
/// `P[n][m]`.
///
/// Community sizes are sampled first; user memberships are drawn from
/// `g_m` until the stub counts balance, the last draw clipped to fit, so
/// `p_n` stays exact. Stubs are then matched by sampling the user class of
/// each community stub from the model's conditional and rejecting duplicate
/// edges. The tiny remainder that cannot be wired without duplicates is
/// dropped; if it exceeds 0.5% of all stubs the matching is reported
/// infeasible.
pub fn sample_finite_network(
    model: &JointDegreeModel,
    communities: usize,
    seed: u64,
) -> Result<BipartiteGraph> {
    if communities < 1 {
        return Err(Error::InvalidParameter(
            "need at least one community".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let size_cdf: Vec<f64> = model
        .p_n
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let membership_cdf: Vec<f64> = model
        .g_m
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect();

    // Community stubs, one per eventual member.
    let mut community_class: Vec<u32> = Vec::with_capacity(communities);
    let mut stubs: Vec<u32> = Vec::new();
    for community in 0..communities as u32 {
        let size = sample_index(&size_cdf, &mut rng);
        community_class.push(size as u32);
        stubs.extend(std::iter::repeat_n(community, size));
    }
    let total_stubs = stubs.len();
    if total_stubs == 0 {
        return Err(Error::InvalidDistribution(
            "sampled zero community stubs".into(),
        ));
    }

    // User stubs drawn from g_m until they balance; draws of zero member-
    // ships stand for users outside the graph and the final draw is clipped.
    let memberships = model.g_m.len();
    let mut pools: Vec<Vec<u32>> = vec![Vec::new(); memberships];
    let mut available = 0usize;
    let mut users = 0u32;
    while available < total_stubs {
        let mut m = sample_index(&membership_cdf, &mut rng);
        if m == 0 {
            continue;
        }
        m = m.min(total_stubs - available);
        pools[m].extend(std::iter::repeat_n(users, m));
        users += 1;
        available += m;
    }

    // Shuffle community stubs so depletion effects spread across classes.
    for i in (1..stubs.len()).rev() {
        let j = rng.random_range(0..=i);
        stubs.swap(i, j);
    }

    let mut row_cdfs: Vec<Option<Vec<f64>>> = vec![None; model.p_n.len()];
    let mut linked: HashSet<(u32, u32)> = HashSet::new();
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(total_stubs);
    let mut dropped = 0usize;

    'stubs: for &community in &stubs {
        let class = community_class[community as usize] as usize;
        let row_cdf = row_cdfs[class].get_or_insert_with(|| {
            model.p_nm[class]
                .iter()
                .scan(0.0, |acc, &p| {
                    *acc += p;
                    Some(*acc)
                })
                .collect()
        });

        for _ in 0..64 {
            let m = sample_index(row_cdf, &mut rng);
            if m >= pools.len() || pools[m].is_empty() {
                continue;
            }
            let slot = rng.random_range(0..pools[m].len());
            let user = pools[m][slot];
            if linked.contains(&(user, community)) {
                continue;
            }
            pools[m].swap_remove(slot);
            linked.insert((user, community));
            edges.push((user, community));
            continue 'stubs;
        }

        // Conditional sampling kept colliding; scan the remaining pools for
        // any stub that does not duplicate an edge.
        let mut wired = false;
        'scan: for pool in pools.iter_mut() {
            for slot in 0..pool.len() {
                let user = pool[slot];
                if !linked.contains(&(user, community)) {
                    pool.swap_remove(slot);
                    linked.insert((user, community));
                    edges.push((user, community));
                    wired = true;
                    break 'scan;
                }
            }
        }
        if !wired {
            dropped += 1;
        }
    }

    if dropped * 200 > total_stubs {
        return Err(Error::InfeasibleMatching {
            unmatched: dropped,
            total: total_stubs,
        });
    }

    let community_width = communities.saturating_sub(1).to_string().len();
    let user_width = (users.max(1) as usize - 1).to_string().len();
    let community_ids: Vec<String> = (0..communities)
        .map(|c| format!("c{c:0community_width$}"))
        .collect();

    let mut dense_of_user: Vec<u32> = vec![u32::MAX; users as usize];
    let mut user_ids: Vec<String> = Vec::new();
    let mut dense_edges: Vec<Edge> = Vec::with_capacity(edges.len());
    for &(user, community) in &edges {
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
    Ok(BipartiteGraph::from_parts(
        community_ids,
        user_ids,
        dense_edges,
    ))
}

/// Empirical mirror of [`analytic_disruption`] on a finite graph, grouping
/// the pruning by community-size class and using unweighted edge counts.
/// For each class, the edges that size-`n` communities hold from users who
/// outlive the class over all edges those survivors hold in classes `<= n`.
pub fn size_class_disruption(g: &BipartiteGraph) -> Vec<SizeClassPoint> {
    let sizes: Vec<u64> = (0..g.num_communities() as u32)
        .map(|c| g.community_unique_degree(c))
        .collect();
    let smallest: Vec<u64> = (0..g.num_users() as u32)
        .map(|u| {
            g.user_adjacency(u)
                .iter()
                .map(|&(c, _)| sizes[c as usize])
                .min()
                .expect("users hold at least one edge")
        })
        .collect();

    let mut classes: Vec<u64> = sizes.iter().copied().filter(|&s| s > 0).collect();
    classes.sort_unstable();
    classes.dedup();

    let mut edges_at = std::collections::HashMap::new();
    let mut survivor_edges_at = std::collections::HashMap::new();
    for edge in g.edges() {
        let n = sizes[edge.community as usize];
        *edges_at.entry(n).or_insert(0u64) += 1;
        if smallest[edge.user as usize] < n {
            *survivor_edges_at.entry(n).or_insert(0u64) += 1;
        }
    }

    let mut points = Vec::with_capacity(classes.len());
    let mut edges_below = 0u64;
    for &n in &classes {
        let numerator = survivor_edges_at.get(&n).copied().unwrap_or(0);
        let denominator = numerator + edges_below;
        points.push(SizeClassPoint {
            size: n as usize,
            disruption: if denominator == 0 {
                0.0
            } else {
                numerator as f64 / denominator as f64
            },
            defined: denominator > 0,
        });
        edges_below += edges_at.get(&n).copied().unwrap_or(0);
    }
    points.reverse();
    points
}

/// Drops the probability mass at zero and renormalizes. Community sizes
/// must start at 1; membership distributions may keep their zero mass (it
/// carries no edges and stands for users outside the graph).
pub fn zero_truncated(dist: &[f64]) -> Result<Vec<f64>> {
    let mut truncated = dist.to_vec();
    if truncated.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    truncated[0] = 0.0;
    cleaned_distribution(&truncated, "zero-truncated distribution")
}

/// Binomial pmf over `0..=trials`, truncated to the smallest prefix holding
/// `1 - tail_mass` of the probability and renormalized. Helper for the
/// reference ensemble experiments.
pub fn truncated_binomial(trials: usize, p: f64, tail_mass: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "binomial probability must be in [0, 1], got {p}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("binomial needs trials >= 1".into()));
    }
    let q = 1.0 - p;
    let mut pmf = Vec::with_capacity(trials + 1);
    // log-space start guards against underflow at large trial counts
    let log_p0 = trials as f64 * q.ln();
    let mut current = log_p0.exp();
    if current == 0.0 {
        // start from the mode instead and fill backwards
        return truncated_binomial_from_mode(trials, p, tail_mass);
    }
    let mut cumulative = current;
    pmf.push(current);
    for k in 0..trials {
        current *= (trials - k) as f64 / (k + 1) as f64 * (p / q);
        pmf.push(current);
        cumulative += current;
        if cumulative >= 1.0 - tail_mass && current < 1e-16 {
            break;
        }
    }
    let total: f64 = pmf.iter().sum();
    for value in &mut pmf {
        *value /= total;
    }
    Ok(pmf)
}

fn truncated_binomial_from_mode(trials: usize, p: f64, tail_mass: f64) -> Result<Vec<f64>> {
    let mode = ((trials + 1) as f64 * p).floor() as usize;
    let q = 1.0 - p;
    let ratio = |k: usize| (trials - k + 1) as f64 / k as f64 * (p / q);
    // unnormalized, anchored at the mode
    let mut upper = vec![1.0f64];
    let mut value = 1.0;
    for k in (mode + 1)..=trials {
        value *= ratio(k);
        upper.push(value);
        if value < 1e-18 {
            break;
        }
    }
    let mut lower = Vec::new();
    value = 1.0;
    for k in (1..=mode).rev() {
        value /= ratio(k);
        lower.push(value);
        if value < 1e-18 {
            break;
        }
    }
    lower.reverse();
    let offset = mode - lower.len();
    let mut pmf = vec![0.0; offset];
    pmf.extend(lower);
    pmf.extend(upper);
    let total: f64 = pmf.iter().sum();
    let mut normalized: Vec<f64> = pmf.iter().map(|v| v / total).collect();
    // trim the far tail
    let mut cumulative = 0.0;
    let mut cut = normalized.len();
    for (k, &v) in normalized.iter().enumerate() {
        cumulative += v;
        if cumulative >= 1.0 - tail_mass {
            cut = k + 1;
            break;
        }
    }
    normalized.truncate(cut);
    let total: f64 = normalized.iter().sum();
    for v in &mut normalized {
        *v /= total;
    }
    Ok(normalized)
}
