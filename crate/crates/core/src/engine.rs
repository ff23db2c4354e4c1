//! The trajectory loop on a fixed full tree.
//!
//! Each round descends from the root by picking the child with the highest
//! bound, samples a reward at the reached leaf, then backs statistics (and,
//! for the child-aggregating policies, cached bounds) up the visited path.
//! Bounds read during the descent use the counts as of the end of the
//! previous round; all increments happen at backup.
//!
//! Flat-UCB and BAST bounds depend only on a node's own statistics and its
//! children's bounds, never on the parent's count, so recomputing cached
//! bounds bottom-up along the visited path keeps every cached value exact at
//! O(depth) work per round. The UCT-style bounds depend on the parent count
//! and are instead computed on the fly during the descent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::env::Environment;
use crate::error::{Error, Result};
use crate::policy::{
    bound_bast, bound_flat_ucb, bound_modified_uct, bound_uct_log, bound_uct_sqrt, NodeStats,
    PolicyConfig, PolicyKind,
};
use crate::tree::{NodeId, TreeIndex};

/// How exact ties between two computable child bounds are resolved.
/// Ties are exact float equality; bounds are deterministic functions, so an
/// epsilon tolerance would silently alter adversarial traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    LeftFirst,
    RightFirst,
    Random,
}

/// Which child is tried first when both are unvisited (both bounds `+inf`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstVisitOrder {
    Action1First,
    Action2First,
}

/// What per-round data a run retains beyond the final counters.
#[derive(Debug, Clone)]
pub enum RecordMode {
    /// Final counters and visit counts only.
    CountsOnly,
    /// Keep every round's record (memory scales with the round count).
    EveryRound,
    /// Snapshot cumulative regret at the given rounds.
    Checkpoints(Vec<u64>),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub policy: PolicyConfig,
    pub environment: Environment,
    pub rounds: u64,
    pub seed: u64,
    pub tie_break: TieBreak,
    pub first_visit_order: FirstVisitOrder,
    pub record: RecordMode,
    /// Per-node true values (arena-indexed); when present, every refreshed
    /// bound along the path is checked against them and the first round
    /// where a bound drops below the node's value is reported.
    pub validity_means: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn new(policy: PolicyConfig, environment: Environment, rounds: u64, seed: u64) -> Self {
        RunConfig {
            policy,
            environment,
            rounds,
            seed,
            tie_break: TieBreak::LeftFirst,
            first_visit_order: FirstVisitOrder::Action1First,
            record: RecordMode::CountsOnly,
            validity_means: None,
        }
    }
}

/// One round's outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub round: u64,
    pub leaf: u64,
    pub reward: f64,
    /// Suboptimality gap of the chosen leaf.
    pub gap: f64,
}

/// Cumulative state snapshotted at a checkpoint round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckpointRow {
    pub round: u64,
    pub leaf: u64,
    pub reward: f64,
    pub regret: f64,
    pub pseudo_regret: f64,
    pub suboptimal_rounds: u64,
}

/// Everything a finished run reports.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub rounds: u64,
    /// Cumulative regret with the comparator pinned at the optimal value on
    /// suboptimal rounds: the sum over those rounds of `mu* - x_t`. On
    /// rounds that chose an optimal leaf the comparator receives the same
    /// sample, contributing zero.
    pub regret: f64,
    /// Pseudo-regret `sum_j n_j * gap_j`, recomputed from the final visit
    /// counts by the canonical leaf-order summation.
    pub pseudo_regret: f64,
    /// The same quantity accumulated round by round; kept as a diagnostic
    /// (floating-point addition order makes bit-exact agreement with the
    /// count-based route impossible in general).
    pub running_pseudo_regret: f64,
    pub suboptimal_rounds: u64,
    pub optimal_value: f64,
    pub records: Vec<RoundRecord>,
    pub checkpoints: Vec<CheckpointRow>,
    /// Final visit count of every node, arena-indexed.
    pub node_visits: Vec<u64>,
    /// Final visit count of every leaf, leaf-indexed.
    pub leaf_visits: Vec<u64>,
    /// First round at which some refreshed bound fell below the node's true
    /// value, when validity tracking was enabled.
    pub bound_violation_round: Option<u64>,
}

/// High-probability bound on `|R_n - pseudo_regret|` from the martingale
/// concentration argument: `sqrt(|Sub(n)| ln(2/beta) / 2)`.
pub fn pseudo_regret_gap_bound(trace: &RunTrace, beta: f64) -> f64 {
    gap_bound_from_counts(trace.suboptimal_rounds, beta)
}

pub fn gap_bound_from_counts(suboptimal_rounds: u64, beta: f64) -> f64 {
    (suboptimal_rounds as f64 * (2.0 / beta).ln() / 2.0).sqrt()
}

/// Incremental fixed-tree search; [`run`] drives it, and callers that need
/// early stopping or mid-run inspection step it manually.
pub struct Search {
    policy: PolicyConfig,
    env: Environment,
    tree: TreeIndex,
    rng: ChaCha8Rng,
    tie_break: TieBreak,
    first_visit_order: FirstVisitOrder,
    leaf_gap: Vec<f64>,
    optimal_value: f64,
    round: u64,
    suboptimal_rounds: u64,
    regret: f64,
    running_pseudo: f64,
    path_buf: Vec<NodeId>,
    validity_means: Option<Vec<f64>>,
    bound_violation_round: Option<u64>,
    cached_bounds: bool,
}

impl Search {
    pub fn new(cfg: RunConfig) -> Result<Search> {
        if cfg.rounds == 0 {
            return Err(Error::EmptyRun);
        }
        let depth = cfg.environment.depth();
        if cfg.policy.depth_limit != depth {
            return Err(Error::InvalidConfig(format!(
                "policy depth {} != environment depth {}",
                cfg.policy.depth_limit, depth
            )));
        }
        if cfg.policy.kind == PolicyKind::GrowingBast {
            return Err(Error::InvalidConfig(
                "growing-tree policy on the fixed-tree engine".into(),
            ));
        }
        let tree = TreeIndex::full(depth)?;
        if let Some(means) = &cfg.validity_means {
            if means.len() != tree.node_count() {
                return Err(Error::InvalidConfig(format!(
                    "validity means length {} != node count {}",
                    means.len(),
                    tree.node_count()
                )));
            }
        }
        let (optimal_value, _) = cfg.environment.optimal();
        let leaf_gap = (0..cfg.environment.leaf_count())
            .map(|j| optimal_value - cfg.environment.true_mean(j))
            .collect();
        let cached_bounds = matches!(cfg.policy.kind, PolicyKind::FlatUcb | PolicyKind::Bast);
        Ok(Search {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            tie_break: cfg.tie_break,
            first_visit_order: cfg.first_visit_order,
            leaf_gap,
            optimal_value,
            round: 0,
            suboptimal_rounds: 0,
            regret: 0.0,
            running_pseudo: 0.0,
            path_buf: Vec::with_capacity(depth as usize + 1),
            validity_means: cfg.validity_means,
            bound_violation_round: None,
            cached_bounds,
            policy: cfg.policy,
            env: cfg.environment,
            tree,
        })
    }

    #[inline]
    pub fn tree(&self) -> &TreeIndex {
        &self.tree
    }

    #[inline]
    pub fn round(&self) -> u64 {
        self.round
    }

    #[inline]
    pub fn optimal_value(&self) -> f64 {
        self.optimal_value
    }

    #[inline]
    pub fn leaf_gap(&self, leaf: u64) -> f64 {
        self.leaf_gap[leaf as usize]
    }

    #[inline]
    pub fn regret(&self) -> f64 {
        self.regret
    }

    #[inline]
    pub fn suboptimal_rounds(&self) -> u64 {
        self.suboptimal_rounds
    }

    #[inline]
    pub fn running_pseudo_regret(&self) -> f64 {
        self.running_pseudo
    }

    #[inline]
    pub fn bound_violation_round(&self) -> Option<u64> {
        self.bound_violation_round
    }

    /// Pseudo-regret from the current visit counts (canonical leaf-order
    /// summation; every caller sees the identical value for identical
    /// counts).
    pub fn pseudo_regret(&self) -> f64 {
        let first = self.tree.node_count() - self.leaf_gap.len();
        let mut total = 0.0;
        for (rec, gap) in self.tree.nodes()[first..].iter().zip(&self.leaf_gap) {
            total += rec.visits as f64 * gap;
        }
        total
    }

    fn stats_for(&self, id: NodeId, parent_visits: u64) -> NodeStats {
        let rec = self.tree.node(id);
        NodeStats {
            mean: rec.mean(),
            visits: rec.visits,
            parent_visits,
            depth: rec.depth,
            child_bounds: None,
        }
    }

    /// Bound of `child` as seen from its parent during the descent.
    #[inline]
    fn descent_bound(&self, child: NodeId, parent_visits: u64) -> f64 {
        match self.policy.kind {
            PolicyKind::UctLog => bound_uct_log(&self.stats_for(child, parent_visits)),
            PolicyKind::UctSqrt => bound_uct_sqrt(&self.stats_for(child, parent_visits)),
            PolicyKind::ModifiedUct => {
                bound_modified_uct(&self.stats_for(child, parent_visits), &self.policy)
            }
            PolicyKind::FlatUcb | PolicyKind::Bast => self.tree.node(child).cached_bound,
            PolicyKind::GrowingBast => unreachable!("rejected at construction"),
        }
    }

    fn select_right(&mut self, left_bound: f64, right_bound: f64, left: NodeId, right: NodeId) -> bool {
        debug_assert!(!left_bound.is_nan() && !right_bound.is_nan());
        if left_bound > right_bound {
            return false;
        }
        if right_bound > left_bound {
            return true;
        }
        let fresh =
            self.tree.node(left).visits == 0 && self.tree.node(right).visits == 0;
        if fresh {
            return self.first_visit_order == FirstVisitOrder::Action2First;
        }
        match self.tie_break {
            TieBreak::LeftFirst => false,
            TieBreak::RightFirst => true,
            TieBreak::Random => self.rng.gen::<bool>(),
        }
    }

    /// Recompute the cached bound of one path node from its own statistics
    /// and its children's cached bounds.
    fn refresh_bound(&mut self, id: NodeId) -> Result<()> {
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
        let bound = match self.policy.kind {
            PolicyKind::FlatUcb => bound_flat_ucb(&stats, &self.policy)?,
            PolicyKind::Bast => bound_bast(&stats, &self.policy)?,
            _ => unreachable!("cached bounds only maintained for flat UCB and BAST"),
        };
        self.tree.node_mut(id).cached_bound = bound;
        Ok(())
    }

    /// Bound of a node recomputed from its current statistics, independent
    /// of the cache. Parent-count-dependent policies read the parent's
    /// current count.
    pub fn node_bound_now(&self, id: NodeId) -> Result<f64> {
        let rec = self.tree.node(id);
        let parent_visits = rec
            .parent
            .map(|p| self.tree.node(p).visits)
            .unwrap_or(rec.visits);
        let child_bounds = rec
            .children
            .map(|(l, r)| (self.tree.node(l).cached_bound, self.tree.node(r).cached_bound));
        let stats = NodeStats {
            mean: rec.mean(),
            visits: rec.visits,
            parent_visits,
            depth: rec.depth,
            child_bounds,
        };
        Ok(match self.policy.kind {
            PolicyKind::UctLog => bound_uct_log(&stats),
            PolicyKind::UctSqrt => bound_uct_sqrt(&stats),
            PolicyKind::ModifiedUct => bound_modified_uct(&stats, &self.policy),
            PolicyKind::FlatUcb => bound_flat_ucb(&stats, &self.policy)?,
            PolicyKind::Bast => bound_bast(&stats, &self.policy)?,
            PolicyKind::GrowingBast => unreachable!(),
        })
    }

    /// Run one trajectory and return its record.
    pub fn step(&mut self) -> Result<RoundRecord> {
        let depth = self.policy.depth_limit;
        let mut current = NodeId::ROOT;
        self.path_buf.clear();
        self.path_buf.push(current);
        for _ in 0..depth {
            let (l, r) = self.tree.node(current).children.unwrap();
            let parent_visits = self.tree.node(current).visits;
            let bl = self.descent_bound(l, parent_visits);
            let br = self.descent_bound(r, parent_visits);
            current = if self.select_right(bl, br, l, r) { r } else { l };
            self.path_buf.push(current);
        }
        let leaf = self.tree.leaf_ordinal(current);
        let reward = self.env.sample(leaf, &mut self.rng)?;

        let path = std::mem::take(&mut self.path_buf);
        self.tree.record_visit(&path, reward)?;
        if self.cached_bounds {
            for &id in path.iter().rev() {
                self.refresh_bound(id)?;
            }
        }

        self.round += 1;
        let gap = self.leaf_gap[leaf as usize];
        if gap > 0.0 {
            self.suboptimal_rounds += 1;
            self.regret += self.optimal_value - reward;
        }
        self.running_pseudo += gap;

        if self.validity_means.is_some() && self.bound_violation_round.is_none() {
            for &id in &path {
                let bound = self.node_bound_now(id)?;
                let mu = self.validity_means.as_ref().unwrap()[id.index()];
                if mu > bound {
                    self.bound_violation_round = Some(self.round);
                    break;
                }
            }
        }
        self.path_buf = path;

        Ok(RoundRecord {
            round: self.round,
            leaf,
            reward,
            gap,
        })
    }

    /// Consume the search and assemble the final trace.
    pub fn into_trace(
        self,
        records: Vec<RoundRecord>,
        checkpoints: Vec<CheckpointRow>,
    ) -> RunTrace {
        let pseudo = self.pseudo_regret();
        RunTrace {
            rounds: self.round,
            regret: self.regret,
            pseudo_regret: pseudo,
            running_pseudo_regret: self.running_pseudo,
            suboptimal_rounds: self.suboptimal_rounds,
            optimal_value: self.optimal_value,
            records,
            checkpoints,
            node_visits: self.tree.node_visits(),
            leaf_visits: self.tree.leaf_visits(),
            bound_violation_round: self.bound_violation_round,
        }
    }
}

/// Execute a configured run to completion.
pub fn run(cfg: RunConfig) -> Result<RunTrace> {
    let rounds = cfg.rounds;
    let record = cfg.record.clone();
    let mut checkpoint_rounds = match &record {
        RecordMode::Checkpoints(list) => {
            let mut v = list.clone();
            v.sort_unstable();
            v.dedup();
            v
        }
        _ => Vec::new(),
    };
    checkpoint_rounds.retain(|&t| t >= 1 && t <= rounds);
    let mut next_checkpoint = 0usize;

    let mut search = Search::new(cfg)?;
    let mut records = Vec::new();
    let mut checkpoints = Vec::new();
    for _ in 0..rounds {
        let rec = search.step()?;
        match record {
            RecordMode::EveryRound => records.push(rec),
            RecordMode::Checkpoints(_) => {
                if next_checkpoint < checkpoint_rounds.len()
                    && checkpoint_rounds[next_checkpoint] == rec.round
                {
                    next_checkpoint += 1;
                    checkpoints.push(CheckpointRow {
                        round: rec.round,
                        leaf: rec.leaf,
                        reward: rec.reward,
                        regret: search.regret(),
                        pseudo_regret: search.pseudo_regret(),
                        suboptimal_rounds: search.suboptimal_rounds(),
                    });
                }
            }
            RecordMode::CountsOnly => {}
        }
    }
    Ok(search.into_trace(records, checkpoints))
}
