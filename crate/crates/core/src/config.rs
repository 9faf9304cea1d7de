//! Resource caps shared by the solvers and oracles.

use serde::{Deserialize, Serialize};

/// Largest pattern order any part of the crate accepts, regardless of the
/// configured cap. Canonical codes are packed into a `u128`.
pub const HARD_PATTERN_CAP: usize = 16;

pub const DEFAULT_PATTERN_CAP: usize = 10;
pub const DEFAULT_MAX_FAMILY: usize = 1 << 24;
pub const DEFAULT_ORACLE_CAP: u64 = 50_000_000;
pub const DEFAULT_MAX_DIMENSION: usize = 32;

pub const ENV_MAX_FAMILY: &str = "DOMPAT_MAX_FAMILY";
pub const ENV_ORACLE_CAP: &str = "DOMPAT_ORACLE_CAP";
pub const ENV_PATTERN_CAP: &str = "DOMPAT_PATTERN_CAP";
pub const ENV_MAX_DIMENSION: &str = "DOMPAT_MAX_DIMENSION";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest pattern order accepted by the parser.
    pub pattern_cap: usize,
    /// Largest candidate family any enumeration may materialize.
    pub max_family: usize,
    /// Largest number of subsets (or vector tuples) an oracle may scan.
    pub oracle_cap: u64,
    /// Largest vector dimension `gen-ov` accepts.
    pub max_dimension: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            pattern_cap: DEFAULT_PATTERN_CAP,
            max_family: DEFAULT_MAX_FAMILY,
            oracle_cap: DEFAULT_ORACLE_CAP,
            max_dimension: DEFAULT_MAX_DIMENSION,
        }
    }
}

impl Limits {
    /// Defaults, overridden by `DOMPAT_*` environment variables when they
    /// parse.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(v) = read_env(ENV_MAX_FAMILY) {
            limits.max_family = v as usize;
        }
        if let Some(v) = read_env(ENV_ORACLE_CAP) {
            limits.oracle_cap = v;
        }
        if let Some(v) = read_env(ENV_PATTERN_CAP) {
            limits.pattern_cap = (v as usize).min(HARD_PATTERN_CAP);
        }
        if let Some(v) = read_env(ENV_MAX_DIMENSION) {
            limits.max_dimension = v as usize;
        }
        limits
    }
}

fn read_env(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.trim().parse().ok()
}
