//! Scratch diagnostics for the growing engine (not part of the deliverable).

use treebandit::growing::{run_growing, GrowingRunConfig};
use treebandit::{FunctionModel, NodeId, PathModel, PolicyConfig, PolicyKind, SmoothnessSeq};

fn figure4_shape() {
    for seed in 0..3u64 {
        let model = FunctionModel::new(0.1).unwrap();
        let policy = PolicyConfig::with_smoothness(
            PolicyKind::GrowingBast,
            0.1,
            1,
            SmoothnessSeq::Exponential { delta: 5.0, gamma: 0.5 },
        )
        .unwrap();
        let cfg = GrowingRunConfig::new(policy, model, 4000, seed);
        let start = std::time::Instant::now();
        let (trace, search) = run_growing(cfg).unwrap();
        let tree = search.tree();
        let max_depth = trace.max_depth;
        let frontier_on_at_max = (0..tree.node_count()).map(|k| NodeId(k as u32)).any(|id| {
            let n = tree.node(id);
            let (lo, hi) = search.interval(id);
            n.is_leaf() && n.depth == max_depth && lo <= 0.9 && 0.9 <= hi
        });
        let deepest_internal_off = (0..tree.node_count())
            .map(|k| NodeId(k as u32))
            .filter(|&id| {
                let (lo, hi) = search.interval(id);
                !tree.node(id).is_leaf() && !(lo <= 0.9 && 0.9 <= hi)
            })
            .map(|id| tree.node(id).depth)
            .max()
            .unwrap_or(0);
        let deepest_node_off = (0..tree.node_count())
            .map(|k| NodeId(k as u32))
            .filter(|&id| {
                let (lo, hi) = search.interval(id);
                !(lo <= 0.9 && 0.9 <= hi)
            })
            .map(|id| tree.node(id).depth)
            .max()
            .unwrap_or(0);
        let deepest_on = (0..tree.node_count())
            .map(|k| NodeId(k as u32))
            .filter(|&id| {
                let (lo, hi) = search.interval(id);
                lo <= 0.9 && 0.9 <= hi
            })
            .map(|id| tree.node(id).depth)
            .max()
            .unwrap();
        let mut per_depth = vec![0usize; max_depth as usize + 1];
        let mut off_spike_deepest = 0u32;
        for k in 0..tree.node_count() {
            let id = NodeId(k as u32);
            per_depth[tree.node(id).depth as usize] += 1;
            let (lo, hi) = search.interval(id);
            // interval entirely outside the spike support [0.8, 1.0]
            if hi <= 0.8 {
                off_spike_deepest = off_spike_deepest.max(tree.node(id).depth);
            }
        }
        println!(
            "fig4 seed {seed}: nodes {} max_depth {max_depth} deepest_on={deepest_on} frontier_on_at_max={frontier_on_at_max} deepest_internal_off={deepest_internal_off} deepest_node_off={deepest_node_off} off_spike_deepest={off_spike_deepest} regret/stage {:.4} ({:?})",
            trace.node_count,
            trace.pseudo_regret / (2.0 * trace.stages as f64),
            start.elapsed()
        );
        if seed == 0 {
            println!("  per-depth node counts: {per_depth:?}");
        }
    }
}

fn main() {
    figure4_shape();
    for stages in [50u64, 200, 400, 1000] {
        let model = PathModel::new(0.77, 1.0, 0.0).unwrap();
        let policy = PolicyConfig::with_smoothness(
            PolicyKind::GrowingBast,
            0.1,
            1,
            SmoothnessSeq::Exponential { delta: 0.5, gamma: 0.5 },
        )
        .unwrap();
        let cfg = GrowingRunConfig::new(policy, model, stages, 0);
        let (trace, search) = run_growing(cfg).unwrap();
        let tree = search.tree();
        let deepest = (0..tree.node_count())
            .map(|k| NodeId(k as u32))
            .filter(|&id| tree.node(id).is_leaf())
            .max_by_key(|&id| tree.node(id).depth)
            .unwrap();
        let (lo, hi) = search.interval(deepest);
        let on = lo <= 0.77 && 0.77 <= hi;
        // deepest node that does contain the target
        let deepest_on = (0..tree.node_count())
            .map(|k| NodeId(k as u32))
            .filter(|&id| {
                let (lo, hi) = search.interval(id);
                lo <= 0.77 && 0.77 <= hi
            })
            .map(|id| tree.node(id).depth)
            .max()
            .unwrap();
        let deepest_internal_off = (0..tree.node_count())
            .map(|k| NodeId(k as u32))
            .filter(|&id| {
                let (lo, hi) = search.interval(id);
                !tree.node(id).is_leaf() && !(lo <= 0.77 && 0.77 <= hi)
            })
            .map(|id| tree.node(id).depth)
            .max()
            .unwrap_or(0);
        println!(
            "stages {stages:5}: nodes {} max_depth {} deepest_frontier_on_path={on} deepest_on_path_depth={deepest_on} deepest_internal_off={deepest_internal_off}",
            trace.node_count, trace.max_depth
        );
        if stages == 200 {
            // dump the first few levels
            for k in 0..tree.node_count().min(15) {
                let id = NodeId(k as u32);
                let n = tree.node(id);
                let (lo, hi) = search.interval(id);
                println!(
                    "  node {k}: d={} n={} mean={:.3} B={:.3} [{:.4},{:.4}] leaf={}",
                    n.depth,
                    n.visits,
                    n.mean(),
                    n.cached_bound,
                    lo,
                    hi,
                    n.is_leaf()
                );
            }
        }
    }
}
