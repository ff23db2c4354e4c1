//! Ground-truth and theory oracles.
//!
//! Exact per-node values by bottom-up max over the leaves, evaluators for
//! the high-probability regret and visit-count bounds (diagnostics, never
//! controls), and first-hit instrumentation for the adversarial tree.

use crate::engine::{RunConfig, Search};
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::policy::{smoothness_delta, PolicyKind, SmoothnessSeq};

/// Exact values of every node of a full tree, arena-indexed in level order.
#[derive(Debug, Clone)]
pub struct ValueMap {
    pub depth_limit: u32,
    /// Node value: the best leaf value in the node's subtree.
    pub mu: Vec<f64>,
    /// Suboptimality gap `mu* - mu_i`; optimal nodes carry exactly zero.
    pub gap: Vec<f64>,
    pub mu_star: f64,
}

impl ValueMap {
    pub fn node_count(&self) -> usize {
        self.mu.len()
    }

    #[inline]
    pub fn first_leaf(&self) -> usize {
        (1usize << self.depth_limit) - 1
    }

    #[inline]
    pub fn depth_of(&self, node: usize) -> u32 {
        (usize::BITS - 1 - (node + 1).leading_zeros()) as u32
    }

    #[inline]
    pub fn is_leaf(&self, node: usize) -> bool {
        node >= self.first_leaf()
    }

    #[inline]
    pub fn is_optimal(&self, node: usize) -> bool {
        self.gap[node] == 0.0
    }

    /// Nodes within `eta` of optimal.
    pub fn eta_optimal_nodes(&self, eta: f64) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&k| self.gap[k] <= eta)
            .collect()
    }

    /// Leaves within `eta` of optimal, as leaf ordinals.
    pub fn eta_optimal_leaves(&self, eta: f64) -> Vec<u64> {
        let first = self.first_leaf();
        (first..self.node_count())
            .filter(|&k| self.gap[k] <= eta)
            .map(|k| (k - first) as u64)
            .collect()
    }

    pub fn optimal_leaves(&self) -> Vec<u64> {
        self.eta_optimal_leaves(0.0)
    }
}

/// Exact node values for an environment: leaf means from the oracle, then a
/// bottom-up max.
pub fn brute_force_values(env: &Environment) -> ValueMap {
    let depth_limit = env.depth();
    let node_count = (1usize << (depth_limit + 1)) - 1;
    let first_leaf = (1usize << depth_limit) - 1;
    let mut mu = vec![0.0; node_count];
    for j in 0..env.leaf_count() {
        mu[first_leaf + j as usize] = env.true_mean(j);
    }
    for k in (0..first_leaf).rev() {
        mu[k] = mu[2 * k + 1].max(mu[2 * k + 2]);
    }
    let mu_star = mu[0];
    let gap = mu.iter().map(|m| mu_star - m).collect();
    ValueMap {
        depth_limit,
        mu,
        gap,
        mu_star,
    }
}

/// Per-node visit-count envelope for the smoothness-aware bound: leaves get
/// the direct cap, internal suboptimal nodes the children's sum, improved by
/// the direct cap whenever the gap clears the smoothness coefficient.
/// `None` for optimal nodes (the envelope only covers suboptimal branches).
pub fn theorem3_envelope(
    values: &ValueMap,
    seq: &SmoothnessSeq,
    beta: f64,
) -> Vec<Option<f64>> {
    let n_nodes = values.node_count() as f64;
    let direct = |margin: f64| 6.0 * (4.0 * n_nodes / (beta * margin * margin)).ln() / (margin * margin);
    let mut env: Vec<Option<f64>> = vec![None; values.node_count()];
    for k in (0..values.node_count()).rev() {
        let gap = values.gap[k];
        if gap <= 0.0 {
            continue;
        }
        if values.is_leaf(k) {
            env[k] = Some(direct(gap));
        } else {
            let sum = env[2 * k + 1].unwrap() + env[2 * k + 2].unwrap();
            let delta_d = smoothness_delta(seq, values.depth_of(k));
            env[k] = Some(if gap > delta_d {
                sum.min(direct(gap - delta_d))
            } else {
                sum
            });
        }
    }
    env
}

/// Pseudo-regret bound of the horizon-scaled bound at round `n`:
/// `(1+sqrt2)/2 * ((1+sqrt2)^D - 1) * sqrt(log(beta_n^{-1}) n) + (3^D - 1)/2`
/// with `beta_n = beta / (2 N n (n+1))`. Evaluated verbatim.
pub fn theorem1_bound(depth_limit: u32, beta: f64, n: u64) -> f64 {
    let sqrt2 = std::f64::consts::SQRT_2;
    let node_count = ((1u64 << (depth_limit + 1)) - 1) as f64;
    let ln_term =
        (2.0 * node_count).ln() + (n as f64).ln() + ((n + 1) as f64).ln() - beta.ln();
    let lead = (1.0 + sqrt2) / 2.0 * ((1.0 + sqrt2).powi(depth_limit as i32) - 1.0);
    lead * (ln_term * n as f64).sqrt() + (3f64.powi(depth_limit as i32) - 1.0) / 2.0
}

/// Constant (round-independent) pseudo-regret bound of flat UCB:
/// `6 sum_{suboptimal leaves} (1/gap) log(2^(D+2) / (gap^2 beta))`.
pub fn theorem2_bound(values: &ValueMap, beta: f64) -> f64 {
    let scale = 2f64.powi(values.depth_limit as i32 + 2);
    let mut total = 0.0;
    for k in values.first_leaf()..values.node_count() {
        let gap = values.gap[k];
        if gap > 0.0 {
            total += (scale / (gap * gap * beta)).ln() / gap;
        }
    }
    6.0 * total
}

/// Smoothness-aware pseudo-regret bound: near-optimal-leaf term plus the
/// cost of cutting everything below the critical depth. Requires an
/// exponential smoothness sequence and a positive margin `eta`.
pub fn theorem4_bound(
    values: &ValueMap,
    seq: &SmoothnessSeq,
    beta: f64,
    eta: f64,
) -> Result<f64> {
    if eta <= 0.0 {
        return Err(Error::InvalidEta(eta));
    }
    let c = seq.exponent_c()?;
    let delta = match *seq {
        SmoothnessSeq::Exponential { delta, .. } => delta,
        _ => unreachable!(),
    };
    let n_nodes = values.node_count() as f64;
    let mut leaf_term = 0.0;
    for k in values.first_leaf()..values.node_count() {
        let gap = values.gap[k];
        if gap > 0.0 && gap <= eta {
            leaf_term += 6.0 / gap * (4.0 * n_nodes / (gap * gap * beta)).ln();
        }
    }
    let cut_term = 54.0 * (3.0 * delta).powf(c) / eta.powf(2.0 + c)
        * (4.0 * n_nodes / (eta * eta * beta)).ln();
    Ok(leaf_term + cut_term)
}

/// One depth level of the first-hit recursion check: at the first hit, the
/// parent count on the optimal path must dominate `required(child count)`.
#[derive(Debug, Clone, Copy)]
pub struct RecursionCheck {
    /// Depth `d` of the child node; the parent sits at `d - 1`.
    pub depth: u32,
    pub parent_visits: u64,
    pub child_visits: u64,
    pub required: f64,
}

/// Visit counts along the optimal path at the round the optimal leaf is
/// first reached, plus the per-depth recursion implied by the bound formula.
#[derive(Debug, Clone)]
pub struct FirstHitReport {
    /// Round of the first optimal-leaf hit; `None` when the budget ran out
    /// first (censored, by design: hits can be astronomically far away).
    pub hit_round: Option<u64>,
    pub budget: u64,
    /// Visits of the optimal-path node at each depth `0..=D`, measured after
    /// the hit round's backup (or at budget exhaustion).
    pub optimal_path_visits: Vec<u64>,
    pub recursion: Vec<RecursionCheck>,
}

impl FirstHitReport {
    pub fn recursion_holds(&self) -> bool {
        self.recursion
            .iter()
            .all(|r| r.parent_visits as f64 >= r.required)
    }
}

/// Run the search until the optimal leaf is first chosen (or `budget`
/// rounds), then read the optimal-path visit counts and evaluate the
/// recursion lower bound applicable to the configured policy.
pub fn first_hit_analysis(cfg: RunConfig, budget: u64) -> Result<FirstHitReport> {
    if budget == 0 {
        return Err(Error::EmptyRun);
    }
    let kind = cfg.policy.kind;
    let depth_limit = cfg.policy.depth_limit;
    let mut search = Search::new(cfg)?;
    let mut hit_round = None;
    let mut hit_leaf = None;
    for _ in 0..budget {
        let rec = search.step()?;
        if rec.gap == 0.0 {
            hit_round = Some(rec.round);
            hit_leaf = Some(rec.leaf);
            break;
        }
    }
    // censored runs instrument the path toward the first optimal leaf
    let target_leaf = hit_leaf.unwrap_or_else(|| {
        (0..search.tree().leaf_count())
            .find(|&j| search.leaf_gap(j) == 0.0)
            .expect("environment has at least one optimal leaf")
    });
    let path = search.tree().path_to(search.tree().leaf_node(target_leaf));
    let optimal_path_visits: Vec<u64> =
        path.iter().map(|&id| search.tree().node(id).visits).collect();

    let d_f = depth_limit as f64;
    let recursion = (1..=depth_limit as usize)
        .filter_map(|d| {
            let child = optimal_path_visits[d] as f64;
            let required = match kind {
                PolicyKind::UctSqrt => child * child / (d_f * d_f * d_f * d_f),
                PolicyKind::UctLog => (child / (2.0 * d_f * d_f)).exp(),
                _ => return None,
            };
            Some(RecursionCheck {
                depth: d as u32,
                parent_visits: optimal_path_visits[d - 1],
                child_visits: optimal_path_visits[d],
                required,
            })
        })
        .collect();

    Ok(FirstHitReport {
        hit_round,
        budget,
        optimal_path_visits,
        recursion,
    })
}

/// Largest value of `node value - leaf value` over the leaves below any
/// node, grouped by node depth. Brute force; used to check smoothness
/// claims against an environment.
pub fn max_gap_profile(values: &ValueMap) -> Vec<f64> {
    let mut worst = vec![0.0f64; values.depth_limit as usize + 1];
    // min leaf value under each node, bottom-up
    let mut min_leaf = values.mu.clone();
    for k in (0..values.first_leaf()).rev() {
        min_leaf[k] = min_leaf[2 * k + 1].min(min_leaf[2 * k + 2]);
    }
    for k in 0..values.node_count() {
        let d = values.depth_of(k) as usize;
        worst[d] = worst[d].max(values.mu[k] - min_leaf[k]);
    }
    worst
}
