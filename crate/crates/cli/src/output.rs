//! Result-file writers. All floats are rendered with 17 significant digits
//! so runs can be replayed bit-exactly; files are written in a fixed order
//! with deterministic content for identical configs and seeds.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Result;

use treebandit::engine::RunTrace;
use treebandit::growing::GrowingSearch;
use treebandit::{GrowingModel, NodeId};

/// 17 significant digits, enough to reproduce any `f64` exactly.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Per-replication regret curve at the checkpoint rounds.
pub fn write_curve(path: &Path, trace: &RunTrace) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "# columns: round, leaf, reward, regret, pseudo_regret")?;
    writeln!(w, "# floats carry 17 significant digits")?;
    writeln!(w, "round,leaf,reward,regret,pseudo_regret")?;
    for row in &trace.checkpoints {
        writeln!(
            w,
            "{},{},{},{},{}",
            row.round,
            row.leaf,
            fmt_f64(row.reward),
            fmt_f64(row.regret),
            fmt_f64(row.pseudo_regret)
        )?;
    }
    Ok(())
}

/// Mean and sample standard deviation (divisor M-1) of per-round regret
/// across replications, one row per checkpoint.
pub fn write_aggregate_curve(
    path: &Path,
    checkpoints: &[u64],
    traces: &[RunTrace],
) -> Result<()> {
    let mut w = create(path)?;
    writeln!(
        w,
        "# mean and sample standard deviation (unbiased, divisor M-1) over {} replications",
        traces.len()
    )?;
    writeln!(
        w,
        "round,mean_regret_per_round,std_regret_per_round,mean_pseudo_per_round,std_pseudo_per_round"
    )?;
    for (i, &t) in checkpoints.iter().enumerate() {
        let reg: Vec<f64> = traces
            .iter()
            .map(|tr| tr.checkpoints[i].regret / t as f64)
            .collect();
        let pse: Vec<f64> = traces
            .iter()
            .map(|tr| tr.checkpoints[i].pseudo_regret / t as f64)
            .collect();
        let (rm, rs) = mean_std(&reg);
        let (pm, ps) = mean_std(&pse);
        writeln!(
            w,
            "{t},{},{},{},{}",
            fmt_f64(rm),
            fmt_f64(rs),
            fmt_f64(pm),
            fmt_f64(ps)
        )?;
    }
    Ok(())
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Leaf visit histogram: index, cell center, raw visits, visit fraction.
pub fn write_histogram(path: &Path, trace: &RunTrace, depth: u32) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "# visit histogram over the {} leaves", trace.leaf_visits.len())?;
    writeln!(w, "leaf,center,visits,fraction")?;
    let n = trace.rounds as f64;
    for (j, &v) in trace.leaf_visits.iter().enumerate() {
        let (center, _) = treebandit::leaf_index_to_interval(j as u64, depth).unwrap();
        writeln!(w, "{j},{},{v},{}", fmt_f64(center), fmt_f64(v as f64 / n))?;
    }
    Ok(())
}

/// Grown-tree snapshot as JSON: id, depth, interval, statistics, links.
pub fn write_tree_json<M: GrowingModel>(path: &Path, search: &GrowingSearch<M>) -> Result<()> {
    let tree = search.tree();
    let mut w = create(path)?;
    writeln!(w, "{{")?;
    writeln!(w, "  \"stages\": {},", search.stage())?;
    writeln!(w, "  \"node_count\": {},", tree.node_count())?;
    writeln!(w, "  \"max_depth\": {},", search.max_depth())?;
    writeln!(w, "  \"nodes\": [")?;
    for k in 0..tree.node_count() {
        let id = NodeId(k as u32);
        let n = tree.node(id);
        let (lo, hi) = search.interval(id);
        let children = match n.children {
            Some((l, r)) => format!("[{}, {}]", l.0, r.0),
            None => "null".into(),
        };
        let parent = match n.parent {
            Some(p) => p.0.to_string(),
            None => "null".into(),
        };
        writeln!(
            w,
            "    {{\"id\": {k}, \"depth\": {}, \"lo\": {}, \"hi\": {}, \"visits\": {}, \"mean\": {}, \"parent\": {parent}, \"children\": {children}}}{}",
            n.depth,
            fmt_f64(lo),
            fmt_f64(hi),
            n.visits,
            fmt_f64(n.mean()),
            if k + 1 == tree.node_count() { "" } else { "," }
        )?;
    }
    writeln!(w, "  ]")?;
    writeln!(w, "}}")?;
    Ok(())
}

/// Grown-tree snapshot in DOT format for graph renderers.
pub fn write_tree_dot<M: GrowingModel>(path: &Path, search: &GrowingSearch<M>) -> Result<()> {
    let tree = search.tree();
    let mut w = create(path)?;
    writeln!(w, "digraph grown_tree {{")?;
    writeln!(w, "  node [shape=point];")?;
    for k in 0..tree.node_count() {
        let id = NodeId(k as u32);
        let n = tree.node(id);
        let (lo, hi) = search.interval(id);
        writeln!(
            w,
            "  n{k} [comment=\"depth {} [{:.6}, {:.6}] visits {}\"];",
            n.depth, lo, hi, n.visits
        )?;
        if let Some((l, r)) = n.children {
            writeln!(w, "  n{k} -> n{};", l.0)?;
            writeln!(w, "  n{k} -> n{};", r.0)?;
        }
    }
    writeln!(w, "}}")?;
    Ok(())
}
