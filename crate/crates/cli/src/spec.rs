//! Experiment configuration: a single JSON document describing the
//! algorithm, environment, run length, replication count, and which output
//! files to emit. Infinite smoothness constants are encoded as the string
//! `"inf"`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use treebandit::engine::{FirstVisitOrder, TieBreak};
use treebandit::{Environment, PolicyConfig, PolicyKind, SmoothnessSeq};

/// A smoothness constant that may be infinite (`"inf"` in JSON).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaValue(pub f64);

impl Serialize for DeltaValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for DeltaValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(DeltaValue(x)),
            Raw::Text(t) if t == "inf" => Ok(DeltaValue(f64::INFINITY)),
            Raw::Text(t) => Err(D::Error::custom(format!(
                "expected a number or \"inf\", got {t:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    UctLog,
    UctSqrt,
    ModifiedUct,
    FlatUcb,
    Bast,
    GrowingBast,
}

impl Algorithm {
    pub fn kind(self) -> PolicyKind {
        match self {
            Algorithm::UctLog => PolicyKind::UctLog,
            Algorithm::UctSqrt => PolicyKind::UctSqrt,
            Algorithm::ModifiedUct => PolicyKind::ModifiedUct,
            Algorithm::FlatUcb => PolicyKind::FlatUcb,
            Algorithm::Bast => PolicyKind::Bast,
            Algorithm::GrowingBast => PolicyKind::GrowingBast,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SmoothnessSpec {
    Exponential {
        delta: DeltaValue,
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
    Polynomial { delta: f64, alpha: f64 },
    Linear { delta: f64 },
    Zero,
    Infinite,
}

fn default_gamma() -> f64 {
    0.5
}

impl SmoothnessSpec {
    pub fn to_seq(&self, depth: u32) -> Result<SmoothnessSeq> {
        let seq = match *self {
            SmoothnessSpec::Exponential { delta: DeltaValue(d), gamma } => {
                if d.is_infinite() {
                    SmoothnessSeq::Infinite
                } else if d == 0.0 {
                    SmoothnessSeq::Zero
                } else {
                    SmoothnessSeq::Exponential { delta: d, gamma }
                }
            }
            SmoothnessSpec::Polynomial { delta, alpha } => {
                SmoothnessSeq::Polynomial { delta, alpha }
            }
            SmoothnessSpec::Linear { delta } => SmoothnessSeq::Linear {
                delta,
                depth_limit: depth,
            },
            SmoothnessSpec::Zero => SmoothnessSeq::Zero,
            SmoothnessSpec::Infinite => SmoothnessSeq::Infinite,
        };
        seq.validate()
            .map_err(|e| anyhow::anyhow!("smoothness: {e}"))?;
        Ok(seq)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    BernoulliFunction { a: f64 },
    BadCase,
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        means: Option<Vec<f64>>,
    },
}

impl EnvironmentSpec {
    pub fn build(&self, depth: u32) -> Result<Environment> {
        match self {
            EnvironmentSpec::BernoulliFunction { a } => {
                Environment::bernoulli_function(*a, depth).map_err(Into::into)
            }
            EnvironmentSpec::BadCase => Environment::bad_case(depth).map_err(Into::into),
            EnvironmentSpec::Table { path, means } => {
                let env = match (path, means) {
                    (Some(p), None) => Environment::table_from_json_file(Path::new(p))?,
                    (None, Some(m)) => Environment::table(m.clone())?,
                    _ => bail!("table environment needs exactly one of `path` or `means`"),
                };
                if env.depth() != depth {
                    bail!(
                        "table has {} leaves but depth {} implies {}",
                        env.leaf_count(),
                        depth,
                        1u64 << depth
                    );
                }
                Ok(env)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreakSpec {
    #[default]
    LeftFirst,
    RightFirst,
    Random,
}

impl TieBreakSpec {
    pub fn to_engine(self) -> TieBreak {
        match self {
            TieBreakSpec::LeftFirst => TieBreak::LeftFirst,
            TieBreakSpec::RightFirst => TieBreak::RightFirst,
            TieBreakSpec::Random => TieBreak::Random,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstVisitSpec {
    #[default]
    Action1First,
    Action2First,
}

impl FirstVisitSpec {
    pub fn to_engine(self) -> FirstVisitOrder {
        match self {
            FirstVisitSpec::Action1First => FirstVisitOrder::Action1First,
            FirstVisitSpec::Action2First => FirstVisitOrder::Action2First,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmitFlags {
    pub regret_curve: bool,
    pub leaf_histogram: bool,
    pub tree_dump: bool,
    pub theory_bounds: bool,
    pub first_hit: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        EmitFlags {
            regret_curve: true,
            leaf_histogram: false,
            tree_dump: false,
            theory_bounds: false,
            first_hit: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub algorithm: Algorithm,
    pub beta: f64,
    pub depth: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<SmoothnessSpec>,
    pub environment: EnvironmentSpec,
    /// Round count for fixed-tree runs; expansion stages for the growing
    /// algorithm.
    pub rounds: u64,
    #[serde(default = "default_reps")]
    pub replications: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tie_break: TieBreakSpec,
    #[serde(default)]
    pub first_visit_order: FirstVisitSpec,
    #[serde(default)]
    pub emit: EmitFlags,
    /// Regret-curve snapshot rounds; log-spaced by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<u64>>,
    /// Depth at which the growing engine samples instead of expanding.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_cap: Option<u32>,
    /// Optimality margin for the near-optimal-leaf theory bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Smoothness constants visited by the `sweep` subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_deltas: Option<Vec<DeltaValue>>,
}

fn default_reps() -> u64 {
    1
}

impl ExperimentSpec {
    pub fn from_json_file(path: &Path) -> Result<ExperimentSpec> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let spec: ExperimentSpec =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            bail!("rounds must be at least 1");
        }
        if self.replications == 0 {
            bail!("replications must be at least 1");
        }
        if matches!(self.algorithm, Algorithm::GrowingBast) {
            if !matches!(self.environment, EnvironmentSpec::BernoulliFunction { .. }) {
                bail!("the growing algorithm needs the bernoulli_function environment");
            }
        } else if self.depth_cap.is_some() {
            bail!("depth_cap only applies to the growing algorithm");
        }
        self.policy()?;
        self.environment.build(self.depth)?;
        Ok(())
    }

    pub fn policy(&self) -> Result<PolicyConfig> {
        let seq = match &self.smoothness {
            Some(s) => s.to_seq(self.depth)?,
            None => SmoothnessSeq::Zero,
        };
        PolicyConfig::with_smoothness(self.algorithm.kind(), self.beta, self.depth, seq)
            .map_err(Into::into)
    }

    /// Policy with the smoothness constant replaced (used by the sweep).
    pub fn policy_with_delta(&self, delta: DeltaValue) -> Result<PolicyConfig> {
        let gamma = match &self.smoothness {
            Some(SmoothnessSpec::Exponential { gamma, .. }) => *gamma,
            _ => default_gamma(),
        };
        let seq = if delta.0.is_infinite() {
            SmoothnessSeq::Infinite
        } else if delta.0 == 0.0 {
            SmoothnessSeq::Zero
        } else {
            SmoothnessSeq::Exponential { delta: delta.0, gamma }
        };
        PolicyConfig::with_smoothness(self.algorithm.kind(), self.beta, self.depth, seq)
            .map_err(Into::into)
    }

    /// Deterministic per-replication seed.
    pub fn replication_seed(&self, rep: u64) -> u64 {
        self.seed.wrapping_add(rep)
    }

    /// Default log-spaced checkpoint schedule: multiples `m * 10^k` for
    /// `m` in 1..=9, clipped to the horizon, always ending at `rounds`.
    pub fn checkpoint_schedule(&self) -> Vec<u64> {
        if let Some(cps) = &self.checkpoints {
            let mut v: Vec<u64> = cps.iter().copied().filter(|&t| t >= 1 && t <= self.rounds).collect();
            v.sort_unstable();
            v.dedup();
            if v.last() != Some(&self.rounds) {
                v.push(self.rounds);
            }
            return v;
        }
        let mut v = Vec::new();
        let mut scale = 1u64;
        'outer: loop {
            for m in 1..=9u64 {
                let t = m.saturating_mul(scale);
                if t > self.rounds {
                    break 'outer;
                }
                v.push(t);
            }
            scale = scale.saturating_mul(10);
        }
        if v.last() != Some(&self.rounds) {
            v.push(self.rounds);
        }
        v
    }
}
