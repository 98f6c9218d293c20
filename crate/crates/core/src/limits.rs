use std::time::{Duration, Instant};

use serde::Serialize;

/// Resource limits threaded through the operations that materialize windows
/// or explore search trees.
#[derive(Debug, Clone, Serialize)]
pub struct Limits {
    /// Maximum number of cells a single window sample may hold.
    pub max_window: u64,
    /// Maximum number of nodes a backtracking search (or closure BFS) may visit.
    pub max_search_nodes: u64,
    /// Optional wall-clock budget in milliseconds. `None` means unlimited.
    pub time_budget_ms: Option<u64>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_window: 10_000_000,
            max_search_nodes: 100_000_000,
            time_budget_ms: None,
        }
    }
}

impl Limits {
    pub fn deadline(&self) -> Option<Instant> {
        self.time_budget_ms
            .map(|ms| Instant::now() + Duration::from_millis(ms))
    }
}
