//! Crate-wide error type.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// Tree depth outside the supported range.
    InvalidDepth(u32),
    /// Leaf index not in `0..2^D`.
    LeafOutOfRange { leaf: u64, depth: u32 },
    /// A recorded path is not a connected root-to-leaf chain.
    DisconnectedPath,
    /// Rewards must lie in `[0, 1]`.
    RewardOutOfRange(f64),
    /// Confidence parameter must lie in `(0, 1)`.
    InvalidBeta(f64),
    /// Smoothness sequence parameter out of range.
    InvalidSmoothness(String),
    /// An internal node was scored without its children's bounds.
    MissingChildBounds,
    /// Table environment rejected (wrong length or out-of-range means).
    InvalidTable(String),
    /// Visit-count bounds are only defined for strictly suboptimal nodes.
    NonPositiveGap(f64),
    /// Theorem-4 style bounds need a positive optimality margin.
    InvalidEta(f64),
    /// A run was requested with zero rounds or zero stages.
    EmptyRun,
    /// Run configuration pieces disagree (policy vs environment vs engine).
    InvalidConfig(String),
    /// The operation needs an exponential smoothness sequence.
    ExponentialSmoothnessRequired,
    /// Reading a table file failed.
    TableIo(std::io::Error),
    /// Parsing a table file failed.
    TableParse(serde_json::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDepth(d) => write!(f, "tree depth {d} out of supported range 1..=30"),
            Error::LeafOutOfRange { leaf, depth } => {
                write!(f, "leaf index {leaf} out of range for depth {depth}")
            }
            Error::DisconnectedPath => write!(f, "path is not a connected root-to-leaf chain"),
            Error::RewardOutOfRange(r) => write!(f, "reward {r} outside [0, 1]"),
            Error::InvalidBeta(b) => write!(f, "beta {b} outside (0, 1)"),
            Error::InvalidSmoothness(msg) => write!(f, "invalid smoothness sequence: {msg}"),
            Error::MissingChildBounds => {
                write!(f, "internal node scored without child bounds")
            }
            Error::InvalidTable(msg) => write!(f, "invalid leaf-mean table: {msg}"),
            Error::NonPositiveGap(g) => {
                write!(f, "visit bound requires a positive gap, got {g}")
            }
            Error::InvalidEta(e) => write!(f, "eta must be positive, got {e}"),
            Error::EmptyRun => write!(f, "run must have at least one round"),
            Error::InvalidConfig(msg) => write!(f, "invalid run configuration: {msg}"),
            Error::ExponentialSmoothnessRequired => {
                write!(f, "operation requires an exponential smoothness sequence")
            }
            Error::TableIo(e) => write!(f, "failed to read table file: {e}"),
            Error::TableParse(e) => write!(f, "failed to parse table file: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::TableIo(e) => Some(e),
            Error::TableParse(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::TableIo(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
