//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `--nocapture`) and asserting the stated gate.
//!
//! The heavy experiments run at full scale, so this suite takes minutes on
//! one core; run it with `cargo test -p treebandit --test acceptance`.

mod highprec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use highprec::HighPrec;
use treebandit::analysis::{
    brute_force_values, first_hit_analysis, theorem1_bound, theorem2_bound, theorem3_envelope,
    theorem4_bound,
};
use treebandit::engine::{
    gap_bound_from_counts, run, FirstVisitOrder, RecordMode, RunConfig, TieBreak,
};
use treebandit::growing::{run_growing, theorem5_visit_bound, GrowingRunConfig};
use treebandit::{
    bast_confidence, bound_bast, bound_modified_uct, bound_uct_log, bound_uct_sqrt, f_eval,
    growing_confidence, modified_uct_coeffs, Environment, FunctionModel, NodeId, NodeStats,
    PolicyConfig, PolicyKind, SmoothnessSeq,
};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

fn log_uniform(rng: &mut ChaCha8Rng, max: f64) -> u64 {
    (rng.gen_range(0.0..max.ln()).exp() as u64).max(1)
}

// ---------------------------------------------------------------------------
// 1. formula oracles
// ---------------------------------------------------------------------------

const ORACLE_TOL: f64 = 1e-12;
const ORACLE_TRIALS: usize = 1000;

struct OracleHarness {
    hp: HighPrec,
    rng: ChaCha8Rng,
}

impl OracleHarness {
    fn new() -> Self {
        OracleHarness {
            hp: HighPrec::new(),
            rng: ChaCha8Rng::seed_from_u64(0xC1),
        }
    }

    fn check(&mut self, formula: &str, worst: &mut f64, got: f64, oracle: &astro_float::BigFloat) {
        let err = self.hp.rel_err(got, oracle);
        if err > *worst {
            *worst = err;
        }
        assert!(
            err <= ORACLE_TOL,
            "{formula}: relative error {err:.3e} (got {got})"
        );
    }
}

#[test]
fn c01_formula_oracles() {
    let mut h = OracleHarness::new();
    let mut lines = Vec::new();

    // plain UCT bound
    let mut worst = 0.0;
    for _ in 0..ORACLE_TRIALS {
        let mean = h.rng.gen::<f64>();
        let visits = log_uniform(&mut h.rng, 1e9);
        let parent = log_uniform(&mut h.rng, 1e9).max(2);
        let got = bound_uct_log(&NodeStats {
            mean,
            visits,
            parent_visits: parent,
            depth: 0,
            child_bounds: None,
        });
        let ln_p = h.hp.ln(&h.hp.from_u64(parent));
        let term = h.hp.div(
            &h.hp.mul(&h.hp.big(2.0), &ln_p),
            &h.hp.from_u64(visits),
        );
        let oracle = h.hp.add(&h.hp.big(mean), &h.hp.sqrt(&term));
        h.check("uct-log", &mut worst, got, &oracle);
    }
    lines.push(format!("uct-log worst {worst:.2e}"));

    // square-root UCT bound
    let mut worst = 0.0;
    for _ in 0..ORACLE_TRIALS {
        let mean = h.rng.gen::<f64>();
        let visits = log_uniform(&mut h.rng, 1e9);
        let parent = log_uniform(&mut h.rng, 1e9);
        let got = bound_uct_sqrt(&NodeStats {
            mean,
            visits,
            parent_visits: parent,
            depth: 0,
            child_bounds: None,
        });
        let term = h.hp.div(
            &h.hp.sqrt(&h.hp.from_u64(parent)),
            &h.hp.from_u64(visits),
        );
        let oracle = h.hp.add(&h.hp.big(mean), &h.hp.sqrt(&term));
        h.check("uct-sqrt", &mut worst, got, &oracle);
    }
    lines.push(format!("uct-sqrt worst {worst:.2e}"));

    // horizon coefficients and the scaled bound built from them
    let mut worst = 0.0;
    for _ in 0..ORACLE_TRIALS {
        let depth_limit = h.rng.gen_range(1u32..=25);
        let depth = h.rng.gen_range(0..=depth_limit);
        let beta = h.rng.gen_range(0.001..0.999);
        let mean = h.rng.gen::<f64>();
        let visits = log_uniform(&mut h.rng, 1e9);

        let (k, kp) = modified_uct_coeffs(depth, depth_limit);
        let two = h.hp.big(2.0);
        let sqrt2 = h.hp.sqrt(&two);
        let base = h.hp.add(&h.hp.big(1.0), &sqrt2);
        let hpow = h.hp.powi(&base, (depth_limit - depth) as usize);
        let k_oracle = h.hp.mul(
            &h.hp.div(&base, &sqrt2),
            &h.hp.sub(&hpow, &h.hp.big(1.0)),
        );
        h.check("horizon-k", &mut worst, k, &k_oracle);
        let three_pow = h.hp.powi(&h.hp.big(3.0), (depth_limit - depth) as usize);
        let kp_oracle = h.hp.div(&h.hp.sub(&three_pow, &h.hp.big(1.0)), &two);
        h.check("horizon-kp", &mut worst, kp, &kp_oracle);

        let cfg = PolicyConfig::new(PolicyKind::ModifiedUct, beta, depth_limit).unwrap();
        let got = bound_modified_uct(
            &NodeStats {
                mean,
                visits,
                parent_visits: 0,
                depth,
                child_bounds: None,
            },
            &cfg,
        );
        let n_nodes = (1u64 << (depth_limit + 1)) - 1;
        let scale = h.hp.mul(&two, &h.hp.from_u64(n_nodes));
        let conf = h.hp.confidence(&scale, visits, beta);
        let oracle = {
            let kc = h.hp.mul(&h.hp.add(&k_oracle, &h.hp.big(1.0)), &conf);
            let tail = h.hp.div(&kp_oracle, &h.hp.from_u64(visits));
            h.hp.add(&h.hp.add(&h.hp.big(mean), &kc), &tail)
        };
        h.check("modified-uct", &mut worst, got, &oracle);
    }
    lines.push(format!("modified-uct worst {worst:.2e}"));

    // flat-UCB leaf bound
    let mut worst = 0.0;
    for _ in 0..ORACLE_TRIALS {
        let depth_limit = h.rng.gen_range(1u32..=25);
        let beta = h.rng.gen_range(0.001..0.999);
        let mean = h.rng.gen::<f64>();
        let visits = log_uniform(&mut h.rng, 1e9);
        let cfg = PolicyConfig::new(PolicyKind::FlatUcb, beta, depth_limit).unwrap();
        let got = bound_flat_leaf(mean, visits, depth_limit, &cfg);
        let scale = h.hp.pow2(depth_limit as u64 + 1);
        let conf = h.hp.confidence(&scale, visits, beta);
        let oracle = h.hp.add(&h.hp.big(mean), &conf);
        h.check("flat-leaf", &mut worst, got, &oracle);
    }
    lines.push(format!("flat-leaf worst {worst:.2e}"));

    // BAST confidence and the full internal combination
    let mut worst = 0.0;
    for _ in 0..ORACLE_TRIALS {
        let depth_limit = h.rng.gen_range(2u32..=25);
        let depth = h.rng.gen_range(0..depth_limit);
        let beta = h.rng.gen_range(0.001..0.999);
        let delta = h.rng.gen_range(0.0..50.0);
        let gamma = h.rng.gen_range(0.05..0.95);
        let mean = h.rng.gen::<f64>();
        let visits = log_uniform(&mut h.rng, 1e9);
        let (cb_l, cb_r) = (h.rng.gen_range(0.0..2.0), h.rng.gen_range(0.0..2.0));

        let seq = SmoothnessSeq::Exponential { delta, gamma };
        let cfg =
            PolicyConfig::with_smoothness(PolicyKind::Bast, beta, depth_limit, seq).unwrap();
        let c_got = bast_confidence(visits, &cfg);
        let n_nodes = (1u64 << (depth_limit + 1)) - 1;
        let scale = h.hp.mul(&h.hp.big(2.0), &h.hp.from_u64(n_nodes));
        let c_oracle = h.hp.confidence(&scale, visits, beta);
        h.check("bast-confidence", &mut worst, c_got, &c_oracle);

        let got = bound_bast(
            &NodeStats {
                mean,
                visits,
                parent_visits: 0,
                depth,
                child_bounds: Some((cb_l, cb_r)),
            },
            &cfg,
        )
        .unwrap();
        let gamma_pow = h.hp.powi(&h.hp.big(gamma), depth as usize);
        let delta_d = h.hp.mul(&h.hp.big(delta), &gamma_pow);
        let optimistic = h.hp.add(&h.hp.add(&h.hp.big(mean), &delta_d), &c_oracle);
        let child_max = h.hp.big(cb_l.max(cb_r));
        let oracle = child_max.min(&optimistic);
        h.check("bast-internal", &mut worst, got, &oracle);
    }
    lines.push(format!("bast worst {worst:.2e}"));

    // depth-dependent growing confidence, including depths where 2^(2d+1)
    // overflows f64
    let mut worst = 0.0;
    for _ in 0..ORACLE_TRIALS {
        let depth = h.rng.gen_range(0u32..=4000);
        let beta = h.rng.gen_range(0.001..0.999);
        let visits = log_uniform(&mut h.rng, 1e9);
        let got = growing_confidence(depth, visits, beta);
        let scale = h.hp.pow2(2 * depth as u64 + 1);
        let oracle = h.hp.confidence(&scale, visits, beta);
        h.check("growing-confidence", &mut worst, got, &oracle);
    }
    lines.push(format!("growing-confidence worst {worst:.2e}"));

    // theorem evaluators; random explicit tables drive the set-valued ones
    let mut worst = 0.0;
    for _ in 0..ORACLE_TRIALS {
        let depth_limit = h.rng.gen_range(1u32..=25);
        let beta = h.rng.gen_range(0.001..0.999);
        let n = log_uniform(&mut h.rng, 1e9);
        let got = theorem1_bound(depth_limit, beta, n);
        let two = h.hp.big(2.0);
        let sqrt2 = h.hp.sqrt(&two);
        let base = h.hp.add(&h.hp.big(1.0), &sqrt2);
        let n_nodes = (1u64 << (depth_limit + 1)) - 1;
        let scale = h.hp.mul(&two, &h.hp.from_u64(n_nodes));
        let nn = h.hp.from_u64(n);
        let n1 = h.hp.from_u64(n + 1);
        let prod = h.hp.mul(&h.hp.mul(&scale, &nn), &n1);
        let ln = {
            let arg = h.hp.div(&prod, &h.hp.big(beta));
            h.hp.ln(&arg)
        };
        let lead = h.hp.mul(
            &h.hp.div(&base, &two),
            &h.hp.sub(&h.hp.powi(&base, depth_limit as usize), &h.hp.big(1.0)),
        );
        let sqrt_term = h.hp.sqrt(&h.hp.mul(&ln, &nn));
        let tail = h.hp.div(
            &h.hp.sub(&h.hp.powi(&h.hp.big(3.0), depth_limit as usize), &h.hp.big(1.0)),
            &two,
        );
        let oracle = h.hp.add(&h.hp.mul(&lead, &sqrt_term), &tail);
        h.check("theorem-1", &mut worst, got, &oracle);
    }
    lines.push(format!("theorem-1 worst {worst:.2e}"));

    let mut worst2 = 0.0;
    let mut worst3 = 0.0;
    let mut worst4 = 0.0;
    for _ in 0..ORACLE_TRIALS {
        let depth_limit = h.rng.gen_range(1u32..=4);
        let beta: f64 = h.rng.gen_range(0.001..0.999);
        let leaves = 1usize << depth_limit;
        let mut means: Vec<f64> = (0..leaves).map(|_| h.rng.gen()).collect();
        means[h.rng.gen_range(0..leaves)] = 1.0; // unique-ish optimum
        let env = Environment::table(means).unwrap();
        let values = brute_force_values(&env);

        // theorem 2
        let got = theorem2_bound(&values, beta);
        let mut total = h.hp.big(0.0);
        let scale = h.hp.pow2(depth_limit as u64 + 2);
        for k in values.first_leaf()..values.node_count() {
            let gap = values.gap[k];
            if gap > 0.0 {
                let g = h.hp.big(gap);
                let arg = h.hp.div(&scale, &h.hp.mul(&h.hp.mul(&g, &g), &h.hp.big(beta)));
                let ln = h.hp.ln(&arg);
                total = h.hp.add(&total, &h.hp.div(&ln, &g));
            }
        }
        let oracle = h.hp.mul(&h.hp.big(6.0), &total);
        h.check("theorem-2", &mut worst2, got, &oracle);

        // theorem 3 envelope, every suboptimal node
        let delta = h.rng.gen_range(0.0..2.0);
        let gamma = h.rng.gen_range(0.05..0.95);
        let seq = SmoothnessSeq::Exponential { delta, gamma };
        let envelope = theorem3_envelope(&values, &seq, beta);
        let n_nodes = h.hp.from_u64(values.node_count() as u64);
        let direct = |h: &mut OracleHarness, margin: f64| {
            let m = h.hp.big(margin);
            let m2 = h.hp.mul(&m, &m);
            let arg = h.hp.div(
                &h.hp.mul(&h.hp.big(4.0), &n_nodes),
                &h.hp.mul(&h.hp.big(beta), &m2),
            );
            let ln = h.hp.ln(&arg);
            h.hp.div(&h.hp.mul(&h.hp.big(6.0), &ln), &m2)
        };
        let mut oracle_env: Vec<Option<astro_float::BigFloat>> =
            vec![None; values.node_count()];
        for k in (0..values.node_count()).rev() {
            let gap = values.gap[k];
            if gap <= 0.0 {
                continue;
            }
            let big = if values.is_leaf(k) {
                direct(&mut h, gap)
            } else {
                let sum = h.hp.add(
                    oracle_env[2 * k + 1].as_ref().unwrap(),
                    oracle_env[2 * k + 2].as_ref().unwrap(),
                );
                let delta_d = delta * gamma.powi(values.depth_of(k) as i32);
                if gap > delta_d {
                    sum.min(&direct(&mut h, gap - delta_d))
                } else {
                    sum
                }
            };
            let got_k = envelope[k].unwrap();
            h.check("theorem-3", &mut worst3, got_k, &big);
            oracle_env[k] = Some(big);
        }

        // theorem 4
        let eta = h.rng.gen_range(0.01..1.0);
        let got = theorem4_bound(&values, &seq, beta, eta).unwrap();
        let c = std::f64::consts::LN_2 / (1.0 / gamma).ln();
        let mut leaf_term = h.hp.big(0.0);
        for k in values.first_leaf()..values.node_count() {
            let gap = values.gap[k];
            if gap > 0.0 && gap <= eta {
                let g = h.hp.big(gap);
                let arg = h.hp.div(
                    &h.hp.mul(&h.hp.big(4.0), &n_nodes),
                    &h.hp.mul(&h.hp.mul(&g, &g), &h.hp.big(beta)),
                );
                let ln = h.hp.ln(&arg);
                let term = h.hp.div(&h.hp.mul(&h.hp.big(6.0), &ln), &g);
                leaf_term = h.hp.add(&leaf_term, &term);
            }
        }
        let big_c = h.hp.big(c);
        let three_delta = h.hp.big(3.0 * delta);
        let pow_3d = h.hp.pow(&three_delta, &big_c);
        let eta_pow = {
            let e = h.hp.big(eta);
            let exp = h.hp.add(&h.hp.big(2.0), &big_c);
            h.hp.pow(&e, &exp)
        };
        let ln_cut = {
            let e = h.hp.big(eta);
            let arg = h.hp.div(
                &h.hp.mul(&h.hp.big(4.0), &n_nodes),
                &h.hp.mul(&h.hp.mul(&e, &e), &h.hp.big(beta)),
            );
            h.hp.ln(&arg)
        };
        let cut = h.hp.mul(
            &h.hp.div(&h.hp.mul(&h.hp.big(54.0), &pow_3d), &eta_pow),
            &ln_cut,
        );
        let oracle = h.hp.add(&leaf_term, &cut);
        h.check("theorem-4", &mut worst4, got, &oracle);
    }
    lines.push(format!("theorem-2 worst {worst2:.2e}"));
    lines.push(format!("theorem-3 worst {worst3:.2e}"));
    lines.push(format!("theorem-4 worst {worst4:.2e}"));

    // theorem-5 visit bound, both branches
    let mut worst = 0.0;
    for _ in 0..ORACLE_TRIALS {
        let depth = h.rng.gen_range(0u32..=30);
        let beta = h.rng.gen_range(0.001..0.999);
        let delta = h.rng.gen_range(0.01..10.0);
        let gamma = h.rng.gen_range(0.05..0.95);
        let gap = h.rng.gen_range(1e-3..1.0);
        let seq = SmoothnessSeq::Exponential { delta, gamma };
        let got = theorem5_visit_bound(gap, depth, &seq, beta).unwrap();
        let delta_d = delta * gamma.powi(depth as i32);
        let oracle = if gap > delta_d {
            let margin = h.hp.big(gap - delta_d);
            let m2 = h.hp.mul(&margin, &margin);
            let scale = h.hp.pow2(2 * depth as u64 + 2);
            let arg = h.hp.div(&scale, &h.hp.mul(&h.hp.big(beta), &m2));
            let ln = h.hp.ln(&arg);
            h.hp.div(&h.hp.mul(&h.hp.big(6.0), &ln), &m2)
        } else {
            let c = std::f64::consts::LN_2 / (1.0 / gamma).ln();
            let big_c = h.hp.big(c);
            let lead = {
                let b = h.hp.div(&h.hp.big(delta), &big_c);
                h.hp.pow(&b, &big_c)
            };
            let ratio = {
                let b = h.hp.div(&h.hp.add(&h.hp.big(2.0), &big_c), &h.hp.big(gap));
                let e = h.hp.add(&big_c, &h.hp.big(2.0));
                h.hp.pow(&b, &e)
            };
            let ln = {
                let g = h.hp.big(gap);
                let c2 = {
                    let t = h.hp.add(&h.hp.big(2.0), &big_c);
                    h.hp.mul(&t, &t)
                };
                let num = h.hp.mul(&h.hp.pow2(2 * depth as u64), &c2);
                let den = h.hp.mul(&h.hp.big(beta), &h.hp.mul(&g, &g));
                let arg = h.hp.div(&num, &den);
                h.hp.ln(&arg)
            };
            let halves = h.hp.div(&h.hp.big(1.5), &h.hp.pow2(depth as u64));
            h.hp.mul(&h.hp.mul(&h.hp.mul(&halves, &lead), &ratio), &ln)
        };
        h.check("theorem-5", &mut worst, got, &oracle);
    }
    lines.push(format!("theorem-5 worst {worst:.2e}"));

    report(
        "1 (formula oracles)",
        true,
        &format!(
            "{} randomized inputs per formula within {ORACLE_TOL:.0e}: {}",
            ORACLE_TRIALS,
            lines.join(", ")
        ),
    );
}

// flat leaf bound through the public interface
fn bound_flat_leaf(mean: f64, visits: u64, depth_limit: u32, cfg: &PolicyConfig) -> f64 {
    treebandit::bound_flat_ucb(
        &NodeStats {
            mean,
            visits,
            parent_visits: 0,
            depth: depth_limit,
            child_bounds: None,
        },
        cfg,
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// 2 & 3. the large-scale regret experiments
// ---------------------------------------------------------------------------

const FIG3_DEPTH: u32 = 17;
const FIG3_ROUNDS: u64 = 10_000_000;
const FIG3_SEEDS: u64 = 5;
const FIG3_BETA: f64 = 0.1;

fn fig3_policy(delta: Option<f64>) -> PolicyConfig {
    let seq = match delta {
        None => SmoothnessSeq::Infinite,
        Some(0.0) => SmoothnessSeq::Zero,
        Some(d) => SmoothnessSeq::Exponential { delta: d, gamma: 0.5 },
    };
    PolicyConfig::with_smoothness(PolicyKind::Bast, FIG3_BETA, FIG3_DEPTH, seq).unwrap()
}

fn fig3_mean_regret(policy: &PolicyConfig, seeds: u64) -> (f64, f64) {
    let env = Environment::bernoulli_function(0.01, FIG3_DEPTH).unwrap();
    let mut per_seed = Vec::new();
    for seed in 0..seeds {
        let cfg = RunConfig::new(policy.clone(), env.clone(), FIG3_ROUNDS, seed);
        let trace = run(cfg).unwrap();
        per_seed.push(trace.regret / FIG3_ROUNDS as f64);
    }
    let mean = per_seed.iter().sum::<f64>() / per_seed.len() as f64;
    let var = per_seed.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
        / (per_seed.len() - 1) as f64;
    (mean, var.sqrt())
}

#[test]
fn c02_flat_ucb_regret_endpoint() {
    let policy = PolicyConfig::new(PolicyKind::FlatUcb, FIG3_BETA, FIG3_DEPTH).unwrap();
    let (mean, std) = fig3_mean_regret(&policy, FIG3_SEEDS);
    report(
        "2 (flat-UCB endpoint)",
        (mean - 0.23).abs() <= 0.05,
        &format!(
            "flat UCB at a=0.01, D=17, n=1e7: mean regret/round {mean:.4} ± {std:.4} over {FIG3_SEEDS} seeds (target 0.23 ± 0.05)"
        ),
    );
}

#[test]
fn c03_delta_ordering() {
    let (mid, mid_std) = fig3_mean_regret(&fig3_policy(Some(50.0)), FIG3_SEEDS);
    let (zero, zero_std) = fig3_mean_regret(&fig3_policy(Some(0.0)), FIG3_SEEDS);
    let (inf, inf_std) = fig3_mean_regret(&fig3_policy(None), FIG3_SEEDS);
    // coarse interior sweep, reported but not gated
    for delta in [10.0, 25.0] {
        let (m, s) = fig3_mean_regret(&fig3_policy(Some(delta)), 2);
        println!(
            "  sweep (not gated): delta={delta}: regret/round {m:.4} ± {s:.4} over 2 seeds{}",
            if m < mid { " — beats delta=50" } else { "" }
        );
    }
    report(
        "3 (delta ordering)",
        mid < zero && mid < inf,
        &format!(
            "regret/round over {FIG3_SEEDS} seeds: delta=50 {mid:.4}±{mid_std:.4}, delta=0 {zero:.4}±{zero_std:.4}, delta=inf {inf:.4}±{inf_std:.4}; need delta=50 strictly below both"
        ),
    );
}

// ---------------------------------------------------------------------------
// 4. concentration of leaf visits
// ---------------------------------------------------------------------------

#[test]
fn c04_visit_concentration() {
    let env = Environment::bernoulli_function(0.1, 10).unwrap();
    let seq = SmoothnessSeq::Exponential { delta: 5.0, gamma: 0.5 };
    let mass_near_peak = |rounds: u64| {
        let policy = PolicyConfig::with_smoothness(PolicyKind::Bast, 0.1, 10, seq).unwrap();
        let trace = run(RunConfig::new(policy, env.clone(), rounds, 1)).unwrap();
        let top = trace
            .leaf_visits
            .iter()
            .enumerate()
            .max_by_key(|(_, &n)| n)
            .unwrap()
            .0 as u64;
        let mass: u64 = trace
            .leaf_visits
            .iter()
            .enumerate()
            .filter(|(j, _)| {
                let y = (*j as f64 + 0.5) / 1024.0;
                (y - 0.9).abs() <= 0.05
            })
            .map(|(_, &n)| n)
            .sum();
        (top, mass as f64 / rounds as f64)
    };
    let (_, mass_small) = mass_near_peak(10_000);
    let (top_large, mass_large) = mass_near_peak(1_000_000);
    let (lo, hi) = {
        let (c, hw) = treebandit::leaf_index_to_interval(top_large, 10).unwrap();
        (c - hw, c + hw)
    };
    let contains = lo <= 0.9 && 0.9 <= hi;
    report(
        "4 (visit concentration)",
        contains && mass_large > mass_small,
        &format!(
            "top leaf at n=1e6 is {top_large} ([{lo:.6}, {hi:.6}] contains 0.9: {contains}); mass within 0.05 of the peak: {mass_small:.4} at n=1e4 vs {mass_large:.4} at n=1e6"
        ),
    );
}

// ---------------------------------------------------------------------------
// 5. adversarial-tree first-hit instrumentation
// ---------------------------------------------------------------------------

fn bad_case_first_hit(kind: PolicyKind, depth: u32, budget: u64) -> treebandit::analysis::FirstHitReport {
    let env = Environment::bad_case(depth).unwrap();
    let policy = PolicyConfig::new(kind, 0.1, depth).unwrap();
    let mut cfg = RunConfig::new(policy, env, 1, 0);
    cfg.first_visit_order = FirstVisitOrder::Action2First;
    first_hit_analysis(cfg, budget).unwrap()
}

#[test]
fn c05_adversarial_first_hit() {
    let sqrt4 = bad_case_first_hit(PolicyKind::UctSqrt, 4, 1_000_000);
    let sqrt6 = bad_case_first_hit(PolicyKind::UctSqrt, 6, 100_000_000);
    let log3 = bad_case_first_hit(PolicyKind::UctLog, 3, 1_000_000);

    // context, not gated: where the super-exponential blowup becomes visible
    for (d, budget) in [(8u32, 10_000_000u64), (10, 10_000_000)] {
        let r = bad_case_first_hit(PolicyKind::UctSqrt, d, budget);
        println!("  context: square-root sequence at D={d}: first hit {:?}", r.hit_round);
    }

    // (a) terminal visit counts at the first hit
    let mut ok_a = true;
    for (name, rep) in [("sqrt D=4", &sqrt4), ("sqrt D=6", &sqrt6), ("log D=3", &log3)] {
        let v = &rep.optimal_path_visits;
        let d = v.len() - 1;
        let good = rep.hit_round.is_some() && v[d] == 1 && v[d - 1] == 2;
        println!("  (a) {name}: hit {:?}, counts {:?}", rep.hit_round, v);
        ok_a &= good;
    }
    report(
        "5a (terminal counts)",
        ok_a,
        "leaf count 1 and parent count 2 at the first hit",
    );

    // (b) square-root recursion at both depths, plus the growth gate
    let hit4 = sqrt4.hit_round.unwrap();
    let hit6 = sqrt6.hit_round.unwrap();
    let growth = hit6 as f64 / hit4 as f64;
    report(
        "5b-recursion (sqrt)",
        sqrt4.recursion_holds() && sqrt6.recursion_holds(),
        &format!(
            "n_(d-1) >= n_d^2 / D^4 at every depth (D=4 hit {hit4}, D=6 hit {hit6})"
        ),
    );
    report(
        "5b-growth (sqrt)",
        growth >= 100.0,
        &format!(
            "first-hit growth D=4 -> D=6 is {growth:.1}x (gate: orders of magnitude, >= 100x); measured dynamics only reach that acceleration at larger depths (see context lines)"
        ),
    );

    // (c) logarithmic recursion at D=3
    report(
        "5c (log recursion)",
        log3.hit_round.is_some() && log3.recursion_holds(),
        &format!("n_(d-1) >= exp(n_d / (2 D^2)) at every depth (hit {:?})", log3.hit_round),
    );

    // (d) the horizon-scaled bound within a 100x smaller budget at D=6
    let budget_d = (hit6 / 100).max(1);
    let modified = bad_case_first_hit(PolicyKind::ModifiedUct, 6, budget_d);
    let modified_full = bad_case_first_hit(PolicyKind::ModifiedUct, 6, 1_000_000);
    println!(
        "  (d) horizon-scaled bound at D=6: hit {:?} within budget {budget_d}; unconstrained hit {:?}",
        modified.hit_round, modified_full.hit_round
    );
    let mod10 = bad_case_first_hit(PolicyKind::ModifiedUct, 10, 1_000_000);
    let sqrt10 = bad_case_first_hit(PolicyKind::UctSqrt, 10, 10_000_000);
    println!(
        "  context: at D=10 the same comparison passes easily: {:?} vs {:?} ({}x)",
        mod10.hit_round,
        sqrt10.hit_round,
        sqrt10.hit_round.unwrap() / mod10.hit_round.unwrap()
    );
    report(
        "5d (modified-UCT speedup)",
        modified.hit_round.is_some(),
        &format!(
            "first hit within {budget_d} rounds (1/100 of the square-root hit time {hit6}); any policy that tries action 2 first needs at least D+1 = 7 rounds, so this gate is unattainable at D=6"
        ),
    );
}

// ---------------------------------------------------------------------------
// 6. visit-count envelope
// ---------------------------------------------------------------------------

/// Leaf-mean table of the two-bump function at depth 4; the exponential
/// sequence (5, 1/2) dominates every within-subtree gap of this table.
fn smooth_table_env() -> Environment {
    let means: Vec<f64> = (0..16)
        .map(|j| f_eval((j as f64 + 0.5) / 16.0, 0.1))
        .collect();
    Environment::table(means).unwrap()
}

#[test]
fn c06_visit_envelope() {
    let env = smooth_table_env();
    let values = brute_force_values(&env);
    let seq = SmoothnessSeq::Exponential { delta: 5.0, gamma: 0.5 };
    let envelope = theorem3_envelope(&values, &seq, 0.1);
    let runs = 200;
    let mut violating_runs = 0;
    for seed in 0..runs {
        let policy = PolicyConfig::with_smoothness(PolicyKind::Bast, 0.1, 4, seq).unwrap();
        let trace = run(RunConfig::new(policy, env.clone(), 100_000, seed)).unwrap();
        let violated = (0..values.node_count()).any(|k| match envelope[k] {
            Some(cap) => trace.node_visits[k] as f64 > cap,
            None => false,
        });
        if violated {
            violating_runs += 1;
        }
    }
    let fraction = violating_runs as f64 / runs as f64;
    report(
        "6 (visit envelope)",
        fraction <= 0.1,
        &format!(
            "{violating_runs}/{runs} runs had a suboptimal node exceed its envelope (fraction {fraction:.3}, gate 0.1)"
        ),
    );
}

// ---------------------------------------------------------------------------
// 7. bounds stay above the true values
// ---------------------------------------------------------------------------

#[test]
fn c07_upper_bound_validity() {
    let env = smooth_table_env();
    let values = brute_force_values(&env);
    let seq = SmoothnessSeq::Exponential { delta: 5.0, gamma: 0.5 };
    let runs = 200;
    let mut detail = Vec::new();
    let mut all_ok = true;
    for kind in [PolicyKind::ModifiedUct, PolicyKind::FlatUcb, PolicyKind::Bast] {
        let mut violating = 0;
        for seed in 0..runs {
            let policy = PolicyConfig::with_smoothness(kind, 0.1, 4, seq).unwrap();
            let mut cfg = RunConfig::new(policy, env.clone(), 10_000, 1000 + seed);
            cfg.validity_means = Some(values.mu.clone());
            let trace = run(cfg).unwrap();
            if trace.bound_violation_round.is_some() {
                violating += 1;
            }
        }
        let fraction = violating as f64 / runs as f64;
        all_ok &= fraction <= 0.1;
        detail.push(format!("{kind:?} {violating}/{runs}"));
    }
    report(
        "7 (upper-bound validity)",
        all_ok,
        &format!("runs with any bound below the node value (gate 0.1 each): {}", detail.join(", ")),
    );
}

// ---------------------------------------------------------------------------
// 8. regret vs pseudo-regret gap
// ---------------------------------------------------------------------------

#[test]
fn c08_regret_gap_concentration() {
    let env = smooth_table_env();
    let beta = 0.1;
    let runs = 200;
    let mut within = 0;
    for seed in 0..runs {
        let policy = PolicyConfig::new(PolicyKind::FlatUcb, beta, 4).unwrap();
        let trace = run(RunConfig::new(policy, env.clone(), 2000, 2000 + seed)).unwrap();
        let gap = (trace.regret - trace.pseudo_regret).abs();
        let bound = gap_bound_from_counts(trace.suboptimal_rounds, beta);
        if gap <= bound {
            within += 1;
        }
    }
    let fraction = within as f64 / runs as f64;
    report(
        "8 (martingale gap)",
        fraction >= 0.9,
        &format!("gap within the concentration bound in {within}/{runs} runs (need >= 90%)"),
    );
}

// ---------------------------------------------------------------------------
// 9. growing-tree shape
// ---------------------------------------------------------------------------

#[test]
fn c09_growing_tree_shape() {
    let seq = SmoothnessSeq::Exponential { delta: 5.0, gamma: 0.5 };
    let policy = PolicyConfig::with_smoothness(PolicyKind::GrowingBast, 0.1, 1, seq).unwrap();
    let model = FunctionModel::new(0.1).unwrap();
    let cfg = GrowingRunConfig::new(policy, model, 4000, 1);
    let (trace, search) = run_growing(cfg).unwrap();
    let tree = search.tree();

    let count_ok = trace.node_count == 2 * 4000 + 1;
    let max_depth = trace.max_depth;

    // a max-depth frontier node whose strict ancestry tracks the optimum
    let ancestry_ok = (0..tree.node_count()).map(|k| NodeId(k as u32)).any(|id| {
        let n = tree.node(id);
        if !(n.is_leaf() && n.depth == max_depth) {
            return false;
        }
        match n.parent {
            Some(p) => {
                let (lo, hi) = search.interval(p);
                lo <= 0.9 && 0.9 <= hi
            }
            None => true,
        }
    });

    // deepest development away from the optimum
    let deepest_off = (0..tree.node_count())
        .map(|k| NodeId(k as u32))
        .filter(|&id| {
            let (lo, hi) = search.interval(id);
            !(lo <= 0.9 && 0.9 <= hi)
        })
        .map(|id| tree.node(id).depth)
        .max()
        .unwrap_or(0);
    let asymmetry_ok = deepest_off as f64 <= max_depth as f64 / 2.0;

    // context: how close the deep region stays to the optimum
    let deepest_set: Vec<(f64, f64)> = (0..tree.node_count())
        .map(|k| NodeId(k as u32))
        .filter(|&id| tree.node(id).depth == max_depth)
        .map(|id| search.interval(id))
        .collect();
    let far = deepest_set
        .iter()
        .map(|(lo, hi)| (lo - 0.9).abs().min((hi - 0.9).abs()))
        .fold(0.0f64, f64::max);
    println!(
        "  context: {} nodes at max depth {max_depth}, all within {far:.2e} of the optimum; deepest node not containing it: {deepest_off}",
        deepest_set.len()
    );

    report(
        "9 (growing-tree shape)",
        count_ok && ancestry_ok && asymmetry_ok,
        &format!(
            "node count {} (want 8001: {count_ok}); max-depth frontier ancestry on the optimum: {ancestry_ok}; deepest node off the optimum {deepest_off} vs max depth {max_depth} (gate: at most half). Cells adjacent to the optimum have gaps below delta_d at every depth, so they are never separated from the optimal branch at this scale",
            trace.node_count,
        ),
    );
}

// ---------------------------------------------------------------------------
// 10. engine exactness
// ---------------------------------------------------------------------------

#[test]
fn c10_engine_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE0);
    for trial in 0..20 {
        let depth = rng.gen_range(2u32..=5);
        let env = match rng.gen_range(0..3) {
            0 => {
                let leaves = 1usize << depth;
                let means = (0..leaves).map(|_| rng.gen::<f64>()).collect();
                Environment::table(means).unwrap()
            }
            1 => Environment::bernoulli_function(rng.gen_range(0.02..0.5), depth).unwrap(),
            _ => Environment::bad_case(depth).unwrap(),
        };
        let kind = [
            PolicyKind::UctLog,
            PolicyKind::UctSqrt,
            PolicyKind::ModifiedUct,
            PolicyKind::FlatUcb,
            PolicyKind::Bast,
        ][rng.gen_range(0..5)];
        let seq = SmoothnessSeq::Exponential {
            delta: rng.gen_range(0.0..10.0),
            gamma: rng.gen_range(0.1..0.9),
        };
        let policy = PolicyConfig::with_smoothness(kind, rng.gen_range(0.01..0.9), depth, seq)
            .unwrap();
        let rounds = rng.gen_range(100u64..3000);
        let seed = rng.gen();
        let mut cfg = RunConfig::new(policy, env.clone(), rounds, seed);
        cfg.tie_break = if rng.gen() { TieBreak::Random } else { TieBreak::LeftFirst };
        cfg.first_visit_order = if rng.gen() {
            FirstVisitOrder::Action1First
        } else {
            FirstVisitOrder::Action2First
        };
        cfg.record = RecordMode::EveryRound;

        let a = run(cfg.clone()).unwrap();
        let b = run(cfg).unwrap();

        // seeded reproducibility, bitwise
        assert_eq!(a.records.len(), b.records.len());
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.leaf, y.leaf, "trial {trial}");
            assert_eq!(x.reward.to_bits(), y.reward.to_bits(), "trial {trial}");
        }
        assert_eq!(a.node_visits, b.node_visits, "trial {trial}");

        // conservation
        assert_eq!(a.node_visits[0], rounds, "trial {trial}: root visits");
        for k in 0..(a.node_visits.len() - 1) / 2 {
            assert_eq!(
                a.node_visits[k],
                a.node_visits[2 * k + 1] + a.node_visits[2 * k + 2],
                "trial {trial}: node {k}"
            );
        }
        assert_eq!(a.leaf_visits.iter().sum::<u64>(), rounds);

        // regret identity: the canonical value equals an independent
        // recomputation from the visit counts, bit for bit
        let (star, _) = env.optimal();
        let mut recomputed = 0.0;
        for (j, &n) in a.leaf_visits.iter().enumerate() {
            recomputed += n as f64 * (star - env.true_mean(j as u64));
        }
        assert_eq!(
            a.pseudo_regret.to_bits(),
            recomputed.to_bits(),
            "trial {trial}: pseudo-regret identity"
        );
        // and the round-by-round accumulation agrees up to reordering error
        assert!(
            (a.running_pseudo_regret - a.pseudo_regret).abs() <= 1e-9 * (1.0 + a.pseudo_regret),
            "trial {trial}: running accumulation drifted"
        );
    }
    report(
        "10 (engine exactness)",
        true,
        "conservation, regret identity, and bitwise seeded reproducibility on 20 randomized configurations",
    );
}
