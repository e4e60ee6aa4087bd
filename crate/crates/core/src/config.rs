use serde::Serialize;

use crate::par::Exec;

/// Default cap on lattice points an enumeration may visit.
pub const DEFAULT_MAX_POINTS: u64 = 50_000_000;
/// Default memory cap, in bits, for semigroup membership tables.
pub const DEFAULT_MAX_TABLE_BITS: u64 = 1_000_000_000;
/// Default cap on candidates tested by the prime search.
pub const DEFAULT_MAX_CANDIDATES: u64 = 10_000_000;
/// Default cap on points scanned when locating an explicit witness after a
/// cheap criterion has already settled non-normality.
pub const DEFAULT_WITNESS_POINTS: u64 = 2_000_000;

/// Budgets and switches shared by the decision procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    pub max_points: u64,
    pub max_table_bits: u64,
    pub max_candidates: u64,
    pub witness_points: u64,
    /// Consult the arithmetic criteria and index-preserving reductions before
    /// enumerating. Off means plain enumeration.
    pub use_criteria: bool,
    pub exec: Exec,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_points: DEFAULT_MAX_POINTS,
            max_table_bits: DEFAULT_MAX_TABLE_BITS,
            max_candidates: DEFAULT_MAX_CANDIDATES,
            witness_points: DEFAULT_WITNESS_POINTS,
            use_criteria: true,
            exec: Exec::default(),
        }
    }
}

impl EngineConfig {
    /// Enumeration only: no criterion short-circuits, no reductions.
    pub fn enumeration_only() -> Self {
        EngineConfig {
            use_criteria: false,
            ..EngineConfig::default()
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_max_points(mut self, max_points: u64) -> Self {
        self.max_points = max_points;
        self
    }
}
