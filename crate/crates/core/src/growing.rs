//! Incremental tree growth: start from a bare root, repeatedly descend the
//! current partial tree by the smoothness-aware bound with a depth-dependent
//! confidence interval, and expand the reached frontier leaf into two
//! children, receiving one reward per child.
//!
//! Reward attribution on expansion: each child starts with one visit and its
//! own reward; every node on the path (the expanded node included) gains two
//! visits and both rewards. A node's mean therefore stays the mean of all
//! rewards obtained in its subtree. With a depth cap, a frontier node at the
//! cap is sampled once (one visit along the path) instead of expanded.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::TieBreak;
use crate::env::GrowingModel;
use crate::error::{Error, Result};
use crate::policy::{bound_growing_bast, NodeStats, PolicyConfig, PolicyKind, SmoothnessSeq};
use crate::tree::{NodeId, TreeIndex};

#[derive(Debug, Clone)]
pub struct GrowingRunConfig<M: GrowingModel> {
    /// Bound configuration; the kind must be `GrowingBast`.
    pub policy: PolicyConfig,
    pub model: M,
    /// Number of expansion stages to run.
    pub stages: u64,
    pub seed: u64,
    pub tie_break: TieBreak,
    /// When set, frontier nodes at this depth are sampled instead of
    /// expanded, so the grown tree embeds into a fixed depth-D tree.
    pub depth_cap: Option<u32>,
    /// Keep per-stage records in the trace.
    pub record_stages: bool,
}

impl<M: GrowingModel> GrowingRunConfig<M> {
    pub fn new(policy: PolicyConfig, model: M, stages: u64, seed: u64) -> Self {
        GrowingRunConfig {
            policy,
            model,
            stages,
            seed,
            tie_break: TieBreak::LeftFirst,
            depth_cap: None,
            record_stages: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StageOutcome {
    /// The frontier node was expanded; one reward per new child.
    Expanded { left_reward: f64, right_reward: f64 },
    /// The frontier node sat at the depth cap and was sampled instead.
    BoundarySampled { reward: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageRecord {
    pub stage: u64,
    pub node: NodeId,
    pub depth: u32,
    pub lo: f64,
    pub hi: f64,
    pub outcome: StageOutcome,
}

#[derive(Debug, Clone)]
pub struct GrowingTrace {
    pub stages: u64,
    pub node_count: usize,
    pub max_depth: u32,
    /// Sum over all reward draws of `optimal value - sampled node's mean`.
    pub pseudo_regret: f64,
    pub records: Vec<StageRecord>,
}

/// The incremental search state; exposes the grown tree and per-node
/// intervals for export and for envelope checks.
pub struct GrowingSearch<M: GrowingModel> {
    policy: PolicyConfig,
    model: M,
    tree: TreeIndex,
    intervals: Vec<(f64, f64)>,
    rng: ChaCha8Rng,
    tie_break: TieBreak,
    depth_cap: Option<u32>,
    stage: u64,
    pseudo_regret: f64,
}

impl<M: GrowingModel> GrowingSearch<M> {
    pub fn new(cfg: GrowingRunConfig<M>) -> Result<GrowingSearch<M>> {
        if cfg.stages == 0 {
            return Err(Error::EmptyRun);
        }
        if cfg.policy.kind != PolicyKind::GrowingBast {
            return Err(Error::InvalidConfig(
                "growing engine requires the growing-tree policy kind".into(),
            ));
        }
        if cfg.depth_cap == Some(0) {
            return Err(Error::InvalidDepth(0));
        }
        Ok(GrowingSearch {
            policy: cfg.policy,
            model: cfg.model,
            tree: TreeIndex::sapling(),
            intervals: vec![(0.0, 1.0)],
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            tie_break: cfg.tie_break,
            depth_cap: cfg.depth_cap,
            stage: 0,
        pseudo_regret: 0.0,
        })
    }

    #[inline]
    pub fn tree(&self) -> &TreeIndex {
        &self.tree
    }

    #[inline]
    pub fn stage(&self) -> u64 {
        self.stage
    }

    #[inline]
    pub fn interval(&self, id: NodeId) -> (f64, f64) {
        self.intervals[id.index()]
    }

    #[inline]
    pub fn model(&self) -> &M {
        &self.model
    }

    #[inline]
    pub fn pseudo_regret(&self) -> f64 {
        self.pseudo_regret
    }

    pub fn max_depth(&self) -> u32 {
        self.tree.nodes().iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Suboptimality gap of a node: optimal value minus the best value
    /// attainable in the node's subtree.
    pub fn node_gap(&self, id: NodeId) -> f64 {
        let (lo, hi) = self.intervals[id.index()];
        self.model.optimal_value() - self.model.node_value(self.tree.node(id).depth, lo, hi)
    }

    fn refresh_bound(&mut self, id: NodeId) {
        let rec = self.tree.node(id);
        let child_bounds = rec
            .children
            .map(|(l, r)| (self.tree.node(l).cached_bound, self.tree.node(r).cached_bound));
        let stats = NodeStats {
            mean: rec.mean(),
            visits: rec.visits,
            parent_visits: 0,
            depth: rec.depth,
            child_bounds,
        };
        self.tree.node_mut(id).cached_bound = bound_growing_bast(&stats, &self.policy);
    }

    fn select_right(&mut self, left_bound: f64, right_bound: f64) -> bool {
        debug_assert!(!left_bound.is_nan() && !right_bound.is_nan());
        if left_bound > right_bound {
            false
        } else if right_bound > left_bound {
            true
        } else {
            match self.tie_break {
                TieBreak::LeftFirst => false,
                TieBreak::RightFirst => true,
                TieBreak::Random => {
                    use rand::Rng;
                    self.rng.gen::<bool>()
                }
            }
        }
    }

    /// Descend to a frontier node and either expand it (two children, one
    /// reward each) or, at the depth cap, sample it once.
    pub fn expand_step(&mut self) -> Result<StageRecord> {
        let mut path = vec![NodeId::ROOT];
        let mut current = NodeId::ROOT;
        while let Some((l, r)) = self.tree.node(current).children {
            let bl = self.tree.node(l).cached_bound;
            let br = self.tree.node(r).cached_bound;
            current = if self.select_right(bl, br) { r } else { l };
            path.push(current);
        }
        let (lo, hi) = self.intervals[current.index()];
        let depth = self.tree.node(current).depth;
        self.stage += 1;

        let outcome = if self.depth_cap.is_some_and(|cap| depth >= cap) {
            let reward = self.model.sample(depth, lo, hi, &mut self.rng);
            self.tree.record_visit(&path, reward)?;
            self.pseudo_regret +=
                self.model.optimal_value() - self.model.node_mean(depth, lo, hi);
            StageOutcome::BoundarySampled { reward }
        } else {
            let mid = 0.5 * (lo + hi);
            let (left, right) = self.tree.add_children(current);
            self.intervals.push((lo, mid));
            self.intervals.push((mid, hi));
            let left_reward = self.model.sample(depth + 1, lo, mid, &mut self.rng);
            let right_reward = self.model.sample(depth + 1, mid, hi, &mut self.rng);
            {
                let rec = self.tree.node_mut(left);
                rec.visits = 1;
                rec.reward_sum = left_reward;
            }
            {
                let rec = self.tree.node_mut(right);
                rec.visits = 1;
                rec.reward_sum = right_reward;
            }
            for &id in &path {
                let rec = self.tree.node_mut(id);
                rec.visits += 2;
                rec.reward_sum += left_reward;
                rec.reward_sum += right_reward;
            }
            self.refresh_bound(left);
            self.refresh_bound(right);
            self.pseudo_regret += self.model.optimal_value()
                - self.model.node_mean(depth + 1, lo, mid)
                + self.model.optimal_value()
                - self.model.node_mean(depth + 1, mid, hi);
            StageOutcome::Expanded {
                left_reward,
                right_reward,
            }
        };
        for &id in path.iter().rev() {
            self.refresh_bound(id);
        }
        Ok(StageRecord {
            stage: self.stage,
            node: current,
            depth,
            lo,
            hi,
            outcome,
        })
    }

    /// Frontier node count per depth.
    pub fn frontier_profile(&self) -> Vec<(u32, usize)> {
        let mut counts: Vec<usize> = Vec::new();
        for n in self.tree.nodes() {
            if n.is_leaf() {
                let d = n.depth as usize;
                if counts.len() <= d {
                    counts.resize(d + 1, 0);
                }
                counts[d] += 1;
            }
        }
        counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(d, c)| (d as u32, c))
            .collect()
    }
}

/// Run the configured number of stages and return the trace together with
/// the final search state (tree, intervals, model).
pub fn run_growing<M: GrowingModel>(
    cfg: GrowingRunConfig<M>,
) -> Result<(GrowingTrace, GrowingSearch<M>)> {
    let stages = cfg.stages;
    let record_stages = cfg.record_stages;
    let mut search = GrowingSearch::new(cfg)?;
    let mut records = Vec::new();
    for _ in 0..stages {
        let rec = search.expand_step()?;
        if record_stages {
            records.push(rec);
        }
    }
    let trace = GrowingTrace {
        stages,
        node_count: search.tree.node_count(),
        max_depth: search.max_depth(),
        pseudo_regret: search.pseudo_regret,
        records,
    };
    Ok((trace, search))
}

/// High-probability cap on the visit count of a suboptimal node of depth `d`
/// in the growing tree. The direct cap applies when the gap clears the
/// smoothness coefficient; otherwise the bound passes through the depth
/// where the exponential sequence falls below the gap.
pub fn theorem5_visit_bound(
    gap: f64,
    depth: u32,
    seq: &SmoothnessSeq,
    beta: f64,
) -> Result<f64> {
    use std::f64::consts::LN_2;
    if !(gap > 0.0) {
        return Err(Error::NonPositiveGap(gap));
    }
    let delta_d = crate::policy::smoothness_delta(seq, depth);
    if gap > delta_d {
        let margin = gap - delta_d;
        let ln_term =
            (2.0 * depth as f64 + 2.0) * LN_2 - beta.ln() - 2.0 * margin.ln();
        Ok(6.0 * ln_term / (margin * margin))
    } else {
        let c = seq.exponent_c()?;
        let delta = match *seq {
            SmoothnessSeq::Exponential { delta, .. } => delta,
            _ => unreachable!(),
        };
        let ln_term = 2.0 * depth as f64 * LN_2 + 2.0 * (2.0 + c).ln()
            - beta.ln()
            - 2.0 * gap.ln();
        Ok(1.5 * (delta / c).powf(c) * ((2.0 + c) / gap).powf(c + 2.0)
            * ln_term
            * (-(depth as f64) * LN_2).exp())
    }
}
