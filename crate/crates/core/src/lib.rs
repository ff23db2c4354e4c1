//! Bandit algorithms for searching the leaves of a binary tree under noisy
//! rewards.
//!
//! The crate provides:
//!
//! - [`tree`]: arena storage for full and incrementally grown binary trees
//!   with per-node visit statistics;
//! - [`env`]: leaf reward models with exact ground-truth oracles — a
//!   two-bump Bernoulli test function, a deterministic adversarial tree, and
//!   explicit leaf tables;
//! - [`policy`]: the bound formulas (plain and square-root UCT, a
//!   horizon-scaled safe variant, flat UCB on the leaves, and the
//!   smoothness-aware BAST bound) as pure functions;
//! - [`engine`]: the fixed-tree trajectory loop with regret instrumentation
//!   and seeded reproducibility;
//! - [`growing`]: the incremental variant that expands one frontier leaf per
//!   stage;
//! - [`analysis`]: brute-force value oracles, the theoretical regret and
//!   visit-count bound evaluators, and first-hit instrumentation for the
//!   adversarial tree.

pub mod analysis;
pub mod engine;
pub mod env;
pub mod error;
pub mod growing;
pub mod policy;
pub mod tree;

pub use engine::{
    pseudo_regret_gap_bound, run, FirstVisitOrder, RecordMode, RunConfig, RunTrace, Search,
    TieBreak,
};
pub use env::{bad_case_reward, f_eval, Action, Environment, FunctionModel, GrowingModel, PathModel};
pub use error::{Error, Result};
pub use growing::{
    run_growing, theorem5_visit_bound, GrowingRunConfig, GrowingSearch, GrowingTrace,
};
pub use policy::{
    bast_confidence, bound_bast, bound_flat_ucb, bound_growing_bast, bound_modified_uct,
    bound_uct_log, bound_uct_sqrt, growing_confidence, modified_uct_coeffs, smoothness_delta,
    NodeStats, PolicyConfig, PolicyKind, SmoothnessSeq,
};
pub use tree::{leaf_index_to_interval, NodeId, NodeRecord, TreeIndex};
