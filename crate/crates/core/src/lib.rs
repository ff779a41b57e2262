//! Combinatorial Dehn fillings of right-angled polytopes with ideal vertices,
//! real moment-angle complexes, and homological spin certificates.

pub mod algebra;
pub mod characteristic;
pub mod complex;
pub mod error;
pub mod filling;
pub mod io;
pub mod moment_angle;
pub mod pipeline;
pub mod verify;
pub mod zoo;

pub use error::{Error, Result};

/// Default cap on the number of cells any explicit construction may produce.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 22;

thread_local! {
    static BUDGET_OVERRIDE: std::cell::Cell<Option<u64>> = const { std::cell::Cell::new(None) };
}

/// Cell cap in force: an active [`with_budget`] override, else
/// `CUSPFORGE_BUDGET` if set to a positive integer, else
/// [`DEFAULT_CELL_BUDGET`].
pub fn cell_budget() -> u64 {
    if let Some(b) = BUDGET_OVERRIDE.with(|c| c.get()) {
        return b;
    }
    std::env::var("CUSPFORGE_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_CELL_BUDGET)
}

/// Runs `f` with the cell cap set to `budget` on the current thread.
pub fn with_budget<T>(budget: u64, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<u64>);
    impl Drop for Restore {
        fn drop(&mut self) {
            BUDGET_OVERRIDE.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(BUDGET_OVERRIDE.with(|c| c.replace(Some(budget))));
    f()
}
