//! Scratch pilots for sizing the acceptance experiments (not a deliverable).

use std::time::Instant;

use treebandit::analysis::{brute_force_values, first_hit_analysis, max_gap_profile};
use treebandit::engine::{run, FirstVisitOrder, RecordMode, RunConfig};
use treebandit::{Environment, PolicyConfig, PolicyKind, SmoothnessSeq};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    match args.get(1).map(|s| s.as_str()) {
        Some("firsthit") => first_hit_pilot(),
        Some("fig3") => fig3_pilot(&args[2..]),
        Some("fig2") => fig2_pilot(),
        Some("lipschitz") => lipschitz_pilot(),
        _ => eprintln!("subcommands: firsthit | fig3 [delta...] | fig2 | lipschitz"),
    }
}

fn first_hit_pilot() {
    let cases: &[(PolicyKind, u32, u64)] = &[
        (PolicyKind::UctLog, 3, 100_000_000),
        (PolicyKind::UctLog, 4, 100_000_000),
        (PolicyKind::UctLog, 5, 1_000_000_000),
        (PolicyKind::UctLog, 6, 2_000_000_000),
        (PolicyKind::UctSqrt, 4, 100_000_000),
        (PolicyKind::UctSqrt, 5, 200_000_000),
        (PolicyKind::UctSqrt, 6, 1_000_000_000),
        (PolicyKind::UctSqrt, 7, 1_000_000_000),
        (PolicyKind::UctSqrt, 8, 2_000_000_000),
        (PolicyKind::UctSqrt, 9, 4_000_000_000),
        (PolicyKind::UctSqrt, 10, 4_000_000_000),
        (PolicyKind::ModifiedUct, 4, 10_000_000),
        (PolicyKind::ModifiedUct, 6, 10_000_000),
        (PolicyKind::ModifiedUct, 8, 10_000_000),
        (PolicyKind::ModifiedUct, 10, 10_000_000),
    ];
    for &(kind, depth, budget) in cases {
        let start = Instant::now();
        let env = Environment::bad_case(depth).unwrap();
        let policy = PolicyConfig::new(kind, 0.1, depth).unwrap();
        let mut cfg = RunConfig::new(policy, env, 1, 0);
        cfg.first_visit_order = FirstVisitOrder::Action2First;
        let report = first_hit_analysis(cfg, budget).unwrap();
        println!(
            "{kind:?} D={depth}: hit={:?} counts={:?} recursion_ok={} ({:?})",
            report.hit_round,
            report.optimal_path_visits,
            report.recursion_holds(),
            start.elapsed()
        );
    }
}

fn fig3_pilot(deltas: &[String]) {
    let depth = 17u32;
    let rounds = 10_000_000u64;
    let env = Environment::bernoulli_function(0.01, depth).unwrap();
    for spec in deltas {
        let start = Instant::now();
        let policy = match spec.as_str() {
            "flat" => PolicyConfig::new(PolicyKind::FlatUcb, 0.1, depth).unwrap(),
            "inf" => PolicyConfig::with_smoothness(
                PolicyKind::Bast,
                0.1,
                depth,
                SmoothnessSeq::Infinite,
            )
            .unwrap(),
            d => {
                let delta: f64 = d.parse().unwrap();
                let seq = if delta == 0.0 {
                    SmoothnessSeq::Zero
                } else {
                    SmoothnessSeq::Exponential { delta, gamma: 0.5 }
                };
                PolicyConfig::with_smoothness(PolicyKind::Bast, 0.1, depth, seq).unwrap()
            }
        };
        let mut sum = 0.0;
        let mut sum_pseudo = 0.0;
        let seeds = 3;
        for seed in 0..seeds {
            let cfg = RunConfig::new(policy.clone(), env.clone(), rounds, seed);
            let trace = run(cfg).unwrap();
            sum += trace.regret / rounds as f64;
            sum_pseudo += trace.pseudo_regret / rounds as f64;
        }
        println!(
            "delta={spec}: R_n/n={:.4} pseudo/n={:.4} over {seeds} seeds ({:?})",
            sum / seeds as f64,
            sum_pseudo / seeds as f64,
            start.elapsed()
        );
    }
}

fn fig2_pilot() {
    let depth = 10u32;
    let env = Environment::bernoulli_function(0.1, depth).unwrap();
    for rounds in [10_000u64, 1_000_000] {
        let start = Instant::now();
        let seq = SmoothnessSeq::Exponential { delta: 5.0, gamma: 0.5 };
        let policy = PolicyConfig::with_smoothness(PolicyKind::Bast, 0.1, depth, seq).unwrap();
        let mut cfg = RunConfig::new(policy, env.clone(), rounds, 1);
        cfg.record = RecordMode::CountsOnly;
        let trace = run(cfg).unwrap();
        let top = trace
            .leaf_visits
            .iter()
            .enumerate()
            .max_by_key(|(_, &n)| n)
            .unwrap();
        let mass_near: u64 = trace
            .leaf_visits
            .iter()
            .enumerate()
            .filter(|(j, _)| {
                let y = (*j as f64 + 0.5) / 1024.0;
                (y - 0.9).abs() <= 0.05
            })
            .map(|(_, &n)| n)
            .sum();
        println!(
            "n={rounds}: top leaf {} ({} visits), mass within 0.05 of 0.9 = {:.4}, R/n={:.4} ({:?})",
            top.0,
            top.1,
            mass_near as f64 / rounds as f64,
            trace.regret / rounds as f64,
            start.elapsed()
        );
    }
}

fn lipschitz_pilot() {
    for (a, depth) in [(0.1f64, 10u32), (0.1, 6), (0.05, 8)] {
        let env = Environment::bernoulli_function(a, depth).unwrap();
        let values = brute_force_values(&env);
        let profile = max_gap_profile(&values);
        let lipschitz = 1.0 / a;
        let mut worst_half = f64::NEG_INFINITY;
        let mut worst_full = f64::NEG_INFINITY;
        for (d, &gap) in profile.iter().enumerate() {
            let cell = 2f64.powi(-(d as i32));
            worst_half = worst_half.max(gap - lipschitz / 2.0 * cell);
            worst_full = worst_full.max(gap - lipschitz * cell);
        }
        println!(
            "a={a} D={depth}: profile={:?}",
            profile
                .iter()
                .map(|g| (g * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        );
        println!(
            "  (L/2)*2^-d slack: {worst_half:+.4} (positive = violated), L*2^-d slack: {worst_full:+.4}"
        );
    }
}
