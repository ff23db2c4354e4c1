//! Leaf reward models with ground-truth oracles.
//!
//! Three fixed-tree environments: a Bernoulli model driven by a continuous
//! test function over `[0, 1]`, an adversarial deterministic tree that
//! punishes over-optimistic search, and an explicit per-leaf table for unit
//! tests. Models are stateless; the run owns the seeded random stream and
//! passes it in, so identical seeds replay identical reward streams.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tree::{leaf_index_to_interval, MAX_DEPTH};

/// The two actions available at every node. Action 1 follows the left
/// child, action 2 the right child, everywhere in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    One,
    Two,
}

/// Two-bump test function: a broad parabola `3.6 x (1 - x)` capped by a
/// spike of height 1 at `x = 1 - a` with slope `1/a` on both sides. The max
/// keeps values in `[0, 1]` over the unit interval.
pub fn f_eval(x: f64, a: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x) && a > 0.0);
    let parabola = 3.6 * x * (1.0 - x);
    let spike = 1.0 - (1.0 - a - x).abs() / a;
    parabola.max(spike)
}

/// Deterministic payoff of the adversarial tree.
///
/// From the node of depth `d` on the optimal branch, action 2 enters a
/// subtree whose every leaf pays `(D - d - 1) / D`; action 1 stays on the
/// optimal branch, which ultimately pays 1.
pub fn bad_case_reward(parent_depth: u32, action: Action, depth: u32) -> f64 {
    debug_assert!(parent_depth < depth);
    match action {
        Action::One => 1.0,
        Action::Two => (depth - parent_depth - 1) as f64 / depth as f64,
    }
}

/// A leaf reward model over the `2^D` leaves of a full tree.
#[derive(Debug, Clone)]
pub enum Environment {
    /// Bernoulli rewards with success probability `f(y_j)` at the center
    /// `y_j` of leaf `j`'s cell.
    BernoulliFunction { a: f64, depth: u32 },
    /// The deterministic adversarial tree.
    BadCase { depth: u32 },
    /// Bernoulli rewards with explicitly tabulated means.
    Table { means: Vec<f64>, depth: u32 },
}

impl Environment {
    pub fn bernoulli_function(a: f64, depth: u32) -> Result<Environment> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidTable(format!("spike width a = {a} must be > 0")));
        }
        if depth == 0 || depth > MAX_DEPTH {
            return Err(Error::InvalidDepth(depth));
        }
        Ok(Environment::BernoulliFunction { a, depth })
    }

    pub fn bad_case(depth: u32) -> Result<Environment> {
        if depth == 0 || depth > MAX_DEPTH {
            return Err(Error::InvalidDepth(depth));
        }
        Ok(Environment::BadCase { depth })
    }

    /// Table of per-leaf means; the length must be a power of two `2^D`
    /// with `D >= 1`, and every mean must lie in `[0, 1]`.
    pub fn table(means: Vec<f64>) -> Result<Environment> {
        let len = means.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidTable(format!(
                "length {len} is not a power of two >= 2"
            )));
        }
        if let Some(bad) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(Error::InvalidTable(format!("mean {bad} outside [0, 1]")));
        }
        let depth = len.trailing_zeros();
        if depth > MAX_DEPTH {
            return Err(Error::InvalidDepth(depth));
        }
        Ok(Environment::Table { means, depth })
    }

    /// Load a table environment from a JSON array of leaf means.
    pub fn table_from_json(json: &str) -> Result<Environment> {
        let means: Vec<f64> = serde_json::from_str(json).map_err(Error::TableParse)?;
        Environment::table(means)
    }

    pub fn table_from_json_file(path: &std::path::Path) -> Result<Environment> {
        let text = std::fs::read_to_string(path)?;
        Environment::table_from_json(&text)
    }

    #[inline]
    pub fn depth(&self) -> u32 {
        match self {
            Environment::BernoulliFunction { depth, .. }
            | Environment::BadCase { depth }
            | Environment::Table { depth, .. } => *depth,
        }
    }

    #[inline]
    pub fn leaf_count(&self) -> u64 {
        1u64 << self.depth()
    }

    /// Exact expected reward of leaf `j`. Instrumentation only; policies
    /// never see it.
    pub fn true_mean(&self, leaf: u64) -> f64 {
        debug_assert!(leaf < self.leaf_count());
        match self {
            Environment::BernoulliFunction { a, depth } => {
                let (center, _) = leaf_index_to_interval(leaf, *depth).unwrap();
                f_eval(center, *a)
            }
            Environment::BadCase { depth } => {
                if leaf == 0 {
                    1.0
                } else {
                    // depth of the first deviation from the all-action-1 path
                    let d = *depth - 1 - leaf.ilog2();
                    bad_case_reward(d, Action::Two, *depth)
                }
            }
            Environment::Table { means, .. } => means[leaf as usize],
        }
    }

    /// Draw one reward for leaf `j`. Bernoulli models consume exactly one
    /// draw per call; the adversarial tree is deterministic and consumes
    /// none.
    pub fn sample(&self, leaf: u64, rng: &mut ChaCha8Rng) -> Result<f64> {
        if leaf >= self.leaf_count() {
            return Err(Error::LeafOutOfRange {
                leaf,
                depth: self.depth(),
            });
        }
        match self {
            Environment::BadCase { .. } => Ok(self.true_mean(leaf)),
            _ => {
                let p = self.true_mean(leaf);
                Ok(if rng.gen::<f64>() < p { 1.0 } else { 0.0 })
            }
        }
    }

    /// Optimal value and the set of optimal leaves.
    pub fn optimal(&self) -> (f64, Vec<u64>) {
        let mut best = f64::NEG_INFINITY;
        for j in 0..self.leaf_count() {
            best = best.max(self.true_mean(j));
        }
        let leaves = (0..self.leaf_count())
            .filter(|&j| self.true_mean(j) == best)
            .collect();
        (best, leaves)
    }
}

/// Reward model for incrementally grown trees: any node, identified by its
/// depth and sub-interval of `[0, 1]`, can be sampled directly.
pub trait GrowingModel {
    /// Draw one reward for the node covering `[lo, hi]` at `depth`.
    fn sample(&self, depth: u32, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> f64;
    /// Expected reward of a sample at this node.
    fn node_mean(&self, depth: u32, lo: f64, hi: f64) -> f64;
    /// Best value attainable anywhere below this node.
    fn node_value(&self, depth: u32, lo: f64, hi: f64) -> f64;
    /// Value of the global optimum.
    fn optimal_value(&self) -> f64;
    /// Whether the global optimum lies inside `[lo, hi]`.
    fn contains_optimum(&self, lo: f64, hi: f64) -> bool;
}

/// Growing-tree counterpart of [`Environment::BernoulliFunction`]: sampling
/// a node draws a Bernoulli at the center of its interval, so the expected
/// reward of any node within distance `w/2` of the optimum is at least
/// `1 - L w / 2` for Lipschitz constant `L = 1/a`.
#[derive(Debug, Clone)]
pub struct FunctionModel {
    a: f64,
    x_star: f64,
    mu_star: f64,
}

impl FunctionModel {
    pub fn new(a: f64) -> Result<FunctionModel> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidTable(format!("spike width a = {a} must be > 0")));
        }
        let mut best = (f64::NEG_INFINITY, 0.0);
        for x in [0.0, 1.0, 0.5, (1.0 - a).clamp(0.0, 1.0)] {
            let v = f_eval(x, a);
            if v > best.0 {
                best = (v, x);
            }
        }
        Ok(FunctionModel {
            a,
            x_star: best.1,
            mu_star: best.0,
        })
    }

    /// Max of the test function over `[lo, hi]`: both pieces are unimodal,
    /// so checking endpoints and interior peaks suffices.
    fn sup_over(&self, lo: f64, hi: f64) -> f64 {
        let mut best = f_eval(lo, self.a).max(f_eval(hi, self.a));
        for peak in [0.5, (1.0 - self.a).clamp(0.0, 1.0)] {
            if lo < peak && peak < hi {
                best = best.max(f_eval(peak, self.a));
            }
        }
        best
    }
}

impl GrowingModel for FunctionModel {
    fn sample(&self, depth: u32, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> f64 {
        let p = self.node_mean(depth, lo, hi);
        if rng.gen::<f64>() < p {
            1.0
        } else {
            0.0
        }
    }

    fn node_mean(&self, _depth: u32, lo: f64, hi: f64) -> f64 {
        f_eval(0.5 * (lo + hi), self.a)
    }

    fn node_value(&self, _depth: u32, lo: f64, hi: f64) -> f64 {
        self.sup_over(lo, hi)
    }

    fn optimal_value(&self) -> f64 {
        self.mu_star
    }

    fn contains_optimum(&self, lo: f64, hi: f64) -> bool {
        lo <= self.x_star && self.x_star <= hi
    }
}

/// A single designated branch pays `on_mean` in expectation, everything
/// else `off_mean`. With means 0 and 1 this is fully deterministic.
#[derive(Debug, Clone)]
pub struct PathModel {
    pub target: f64,
    pub on_mean: f64,
    pub off_mean: f64,
}

impl PathModel {
    pub fn new(target: f64, on_mean: f64, off_mean: f64) -> Result<PathModel> {
        for m in [on_mean, off_mean] {
            if !(0.0..=1.0).contains(&m) {
                return Err(Error::RewardOutOfRange(m));
            }
        }
        if on_mean <= off_mean {
            return Err(Error::InvalidTable(
                "on-path mean must exceed off-path mean".into(),
            ));
        }
        if !(0.0..=1.0).contains(&target) {
            return Err(Error::InvalidTable(format!("target {target} outside [0, 1]")));
        }
        Ok(PathModel {
            target,
            on_mean,
            off_mean,
        })
    }

    #[inline]
    fn on_path(&self, lo: f64, hi: f64) -> bool {
        lo <= self.target && self.target <= hi
    }
}

impl GrowingModel for PathModel {
    fn sample(&self, depth: u32, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> f64 {
        let p = self.node_mean(depth, lo, hi);
        if rng.gen::<f64>() < p {
            1.0
        } else {
            0.0
        }
    }

    fn node_mean(&self, _depth: u32, lo: f64, hi: f64) -> f64 {
        if self.on_path(lo, hi) {
            self.on_mean
        } else {
            self.off_mean
        }
    }

    fn node_value(&self, depth: u32, lo: f64, hi: f64) -> f64 {
        self.node_mean(depth, lo, hi)
    }

    fn optimal_value(&self) -> f64 {
        self.on_mean
    }

    fn contains_optimum(&self, lo: f64, hi: f64) -> bool {
        self.on_path(lo, hi)
    }
}
