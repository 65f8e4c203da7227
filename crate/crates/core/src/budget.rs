use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

/// Environment variable overriding default wall-clock budgets, in milliseconds.
pub const BUDGET_ENV: &str = "HATLAB_BUDGET_MS";

/// Search budget: an optional node limit and an optional wall-clock deadline.
///
/// Node limits are deterministic; deadlines are not and exist only as a
/// safety net for interactive use.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub node_limit: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(limit: u64) -> Self {
        Budget { node_limit: Some(limit), deadline: None }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.deadline = Some(Instant::now() + timeout);
        self
    }

    /// Applies the `HATLAB_BUDGET_MS` override, if set and well-formed.
    pub fn with_env_override(self) -> Self {
        match std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse::<u64>().ok()) {
            Some(ms) => self.with_timeout(Duration::from_millis(ms)),
            None => self,
        }
    }

    pub fn meter(&self) -> Meter {
        Meter { budget: *self, nodes: AtomicU64::new(0) }
    }
}

/// Shared node counter charged against a [`Budget`].
#[derive(Debug)]
pub struct Meter {
    budget: Budget,
    nodes: AtomicU64,
}

impl Meter {
    /// Charges one node; returns `false` once the budget is exhausted.
    #[inline]
    pub fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(limit) = self.budget.node_limit {
            if n > limit {
                return false;
            }
        }
        if n & 0x3ff == 0 {
            if let Some(deadline) = self.budget.deadline {
                if Instant::now() > deadline {
                    return false;
                }
            }
        }
        true
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }
}
