//! Upper-confidence bound formulas.
//!
//! Every bound is a pure function of node statistics and a validated
//! [`PolicyConfig`]; the search engines own caching and traversal. Unvisited
//! nodes always score `+inf`, which forces first visits. Confidence terms of
//! the form `log(K * n * (n+1) / beta)` are evaluated as sums of logarithms
//! so they stay finite even when `K` (e.g. `2^(2d+1)` for deep grown trees)
//! overflows `f64`.

use std::f64::consts::{LN_2, SQRT_2};

use crate::error::{Error, Result};

/// Which bound formula drives the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    /// Mean plus `sqrt(2 ln(parent) / n)`.
    UctLog,
    /// Mean plus `sqrt(sqrt(parent) / n)`.
    UctSqrt,
    /// Depth-horizon scaled confidence with an additive `1/n` term.
    ModifiedUct,
    /// UCB on the leaves; internal nodes take the max of their children.
    FlatUcb,
    /// Smoothness-aware bound: min of the children's max and an optimistic
    /// mean-plus-smoothness term.
    Bast,
    /// BAST with the depth-dependent confidence used by the growing engine.
    GrowingBast,
}

/// Per-depth smoothness coefficients `delta_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmoothnessSeq {
    /// `delta * gamma^d` with `gamma` in (0, 1).
    Exponential { delta: f64, gamma: f64 },
    /// `delta * d^alpha` with `alpha < 0`; at `d = 0` this is defined as
    /// `delta` (the root coefficient is never binding).
    Polynomial { delta: f64, alpha: f64 },
    /// `delta * (D - d)`, clamped to zero below the leaves.
    Linear { delta: f64, depth_limit: u32 },
    /// No slack: the optimistic term collapses to mean plus confidence.
    Zero,
    /// Infinite slack: the optimistic term never binds and the bound reduces
    /// to the children's max.
    Infinite,
}

impl SmoothnessSeq {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SmoothnessSeq::Exponential { delta, gamma } => {
                if !(delta >= 0.0 && delta.is_finite()) {
                    return Err(Error::InvalidSmoothness(format!("delta {delta}")));
                }
                if !(gamma > 0.0 && gamma < 1.0) {
                    return Err(Error::InvalidSmoothness(format!("gamma {gamma} not in (0,1)")));
                }
            }
            SmoothnessSeq::Polynomial { delta, alpha } => {
                if !(delta >= 0.0 && delta.is_finite()) {
                    return Err(Error::InvalidSmoothness(format!("delta {delta}")));
                }
                if !(alpha < 0.0) {
                    return Err(Error::InvalidSmoothness(format!("alpha {alpha} not < 0")));
                }
            }
            SmoothnessSeq::Linear { delta, .. } => {
                if !(delta >= 0.0 && delta.is_finite()) {
                    return Err(Error::InvalidSmoothness(format!("delta {delta}")));
                }
            }
            SmoothnessSeq::Zero | SmoothnessSeq::Infinite => {}
        }
        Ok(())
    }

    /// The exponent `c = log(2) / log(1/gamma)` of an exponential sequence.
    pub fn exponent_c(&self) -> Result<f64> {
        match *self {
            SmoothnessSeq::Exponential { gamma, .. } => Ok(LN_2 / (1.0 / gamma).ln()),
            _ => Err(Error::ExponentialSmoothnessRequired),
        }
    }
}

/// `delta_d` for depth `d`.
pub fn smoothness_delta(seq: &SmoothnessSeq, depth: u32) -> f64 {
    match *seq {
        SmoothnessSeq::Exponential { delta, gamma } => delta * gamma.powi(depth as i32),
        SmoothnessSeq::Polynomial { delta, alpha } => {
            delta * (depth.max(1) as f64).powf(alpha)
        }
        SmoothnessSeq::Linear { delta, depth_limit } => {
            delta * depth_limit.saturating_sub(depth) as f64
        }
        SmoothnessSeq::Zero => 0.0,
        SmoothnessSeq::Infinite => f64::INFINITY,
    }
}

/// Validated bound-formula configuration with precomputed log constants.
#[derive(Debug, Clone)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    pub beta: f64,
    pub depth_limit: u32,
    /// `N = 2^(D+1) - 1`, the number of nodes in the full tree.
    pub node_count: u64,
    pub smoothness: SmoothnessSeq,
    ln_inv_beta: f64,
    /// `ln(2N)`, the log scale shared by the modified-UCT and BAST terms.
    ln_two_nodes: f64,
    /// `(D+1) ln 2`, the per-leaf log scale of the flat bound.
    ln_leaf_cells: f64,
    /// Depth-horizon coefficient pairs, indexed by depth.
    coeffs: Vec<(f64, f64)>,
}

impl PolicyConfig {
    /// Configuration with no smoothness slack.
    pub fn new(kind: PolicyKind, beta: f64, depth_limit: u32) -> Result<PolicyConfig> {
        PolicyConfig::with_smoothness(kind, beta, depth_limit, SmoothnessSeq::Zero)
    }

    pub fn with_smoothness(
        kind: PolicyKind,
        beta: f64,
        depth_limit: u32,
        smoothness: SmoothnessSeq,
    ) -> Result<PolicyConfig> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidBeta(beta));
        }
        if depth_limit == 0 || depth_limit > crate::tree::MAX_DEPTH {
            return Err(Error::InvalidDepth(depth_limit));
        }
        smoothness.validate()?;
        let node_count = (1u64 << (depth_limit + 1)) - 1;
        let coeffs = (0..=depth_limit)
            .map(|d| modified_uct_coeffs(d, depth_limit))
            .collect();
        Ok(PolicyConfig {
            kind,
            beta,
            depth_limit,
            node_count,
            smoothness,
            ln_inv_beta: -beta.ln(),
            ln_two_nodes: (2.0 * node_count as f64).ln(),
            ln_leaf_cells: (depth_limit + 1) as f64 * LN_2,
            coeffs,
        })
    }

    #[inline]
    fn horizon_coeffs(&self, depth: u32) -> (f64, f64) {
        self.coeffs[depth as usize]
    }
}

/// Inputs to a bound evaluation, snapshotted from one node.
#[derive(Debug, Clone, Copy)]
pub struct NodeStats {
    /// Empirical mean of rewards through the node (ignored when unvisited).
    pub mean: f64,
    pub visits: u64,
    pub parent_visits: u64,
    pub depth: u32,
    /// Cached bounds of the two children, when the node has children.
    pub child_bounds: Option<(f64, f64)>,
}

#[inline]
fn ln_n_terms(n: u64) -> f64 {
    (n as f64).ln() + ((n + 1) as f64).ln()
}

/// Plain UCT bound: mean plus `sqrt(2 ln(p) / n)`.
///
/// `ln(p) <= 0` (parent visited at most once) contributes no exploration.
pub fn bound_uct_log(stats: &NodeStats) -> f64 {
    if stats.visits == 0 {
        return f64::INFINITY;
    }
    let exploration = if stats.parent_visits <= 1 {
        0.0
    } else {
        (2.0 * (stats.parent_visits as f64).ln() / stats.visits as f64).sqrt()
    };
    stats.mean + exploration
}

/// UCT with the faster-growing `sqrt(sqrt(p) / n)` exploration sequence.
pub fn bound_uct_sqrt(stats: &NodeStats) -> f64 {
    if stats.visits == 0 {
        return f64::INFINITY;
    }
    stats.mean + ((stats.parent_visits as f64).sqrt() / stats.visits as f64).sqrt()
}

/// Depth-horizon coefficients of the modified-UCT bound.
///
/// With `h = D - d`: the confidence multiplier is
/// `(1+sqrt(2))/sqrt(2) * ((1+sqrt(2))^h - 1)` and the additive `1/n`
/// coefficient is `(3^h - 1)/2`. Both vanish at the leaves.
pub fn modified_uct_coeffs(depth: u32, depth_limit: u32) -> (f64, f64) {
    debug_assert!(depth <= depth_limit);
    let h = (depth_limit - depth) as i32;
    let base = 1.0 + SQRT_2;
    let k = base / SQRT_2 * (base.powi(h) - 1.0);
    let k_prime = (3f64.powi(h) - 1.0) / 2.0;
    (k, k_prime)
}

/// Modified-UCT bound: a true upper confidence bound that widens
/// exponentially with the remaining depth.
pub fn bound_modified_uct(stats: &NodeStats, cfg: &PolicyConfig) -> f64 {
    if stats.visits == 0 {
        return f64::INFINITY;
    }
    let n = stats.visits as f64;
    let (k, k_prime) = cfg.horizon_coeffs(stats.depth);
    let ln_term = cfg.ln_two_nodes + ln_n_terms(stats.visits) + cfg.ln_inv_beta;
    stats.mean + (k + 1.0) * (ln_term / (2.0 * n)).sqrt() + k_prime / n
}

/// Flat UCB: a per-leaf confidence bound, propagated to internal nodes as
/// the max of the children's bounds.
pub fn bound_flat_ucb(stats: &NodeStats, cfg: &PolicyConfig) -> Result<f64> {
    if stats.depth == cfg.depth_limit {
        if stats.visits == 0 {
            return Ok(f64::INFINITY);
        }
        let n = stats.visits as f64;
        let ln_term = cfg.ln_leaf_cells + ln_n_terms(stats.visits) + cfg.ln_inv_beta;
        Ok(stats.mean + (ln_term / (2.0 * n)).sqrt())
    } else {
        let (l, r) = stats.child_bounds.ok_or(Error::MissingChildBounds)?;
        Ok(l.max(r))
    }
}

/// Confidence interval `c_n` of the fixed-tree BAST bound.
///
/// Undefined at `n = 0`; this returns `+inf` so unvisited nodes stay forced.
pub fn bast_confidence(visits: u64, cfg: &PolicyConfig) -> f64 {
    if visits == 0 {
        return f64::INFINITY;
    }
    let ln_term = cfg.ln_two_nodes + ln_n_terms(visits) + cfg.ln_inv_beta;
    (ln_term / (2.0 * visits as f64)).sqrt()
}

/// BAST bound on a fixed tree.
///
/// Leaves score mean plus confidence; internal nodes take the min of the
/// children's max and the optimistic `mean + delta_d + c_n` term. Infinite
/// smoothness recovers flat UCB's combination rule, zero smoothness an
/// UCT-like one.
pub fn bound_bast(stats: &NodeStats, cfg: &PolicyConfig) -> Result<f64> {
    if stats.depth == cfg.depth_limit {
        if stats.visits == 0 {
            return Ok(f64::INFINITY);
        }
        return Ok(stats.mean + bast_confidence(stats.visits, cfg));
    }
    let (l, r) = stats.child_bounds.ok_or(Error::MissingChildBounds)?;
    if stats.visits == 0 {
        return Ok(f64::INFINITY);
    }
    let delta_d = smoothness_delta(&cfg.smoothness, stats.depth);
    let optimistic = stats.mean + delta_d + bast_confidence(stats.visits, cfg);
    Ok(l.max(r).min(optimistic))
}

/// Depth-dependent confidence interval used by the growing-tree engine:
/// `sqrt(log(2^(2d+1) n (n+1) / beta) / (2n))`.
pub fn growing_confidence(depth: u32, visits: u64, beta: f64) -> f64 {
    if visits == 0 {
        return f64::INFINITY;
    }
    let ln_term = (2.0 * depth as f64 + 1.0) * LN_2 + ln_n_terms(visits) - beta.ln();
    (ln_term / (2.0 * visits as f64)).sqrt()
}

/// BAST bound on a grown tree; frontier nodes (no children yet) play the
/// role of leaves and the confidence interval widens with depth.
pub fn bound_growing_bast(stats: &NodeStats, cfg: &PolicyConfig) -> f64 {
    if stats.visits == 0 {
        return f64::INFINITY;
    }
    let confidence = growing_confidence(stats.depth, stats.visits, cfg.beta);
    match stats.child_bounds {
        None => stats.mean + confidence,
        Some((l, r)) => {
            let delta_d = smoothness_delta(&cfg.smoothness, stats.depth);
            l.max(r).min(stats.mean + delta_d + confidence)
        }
    }
}
