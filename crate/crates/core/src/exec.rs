//! Trial execution, serial or data-parallel.
//!
//! Results always come back in trial order, so any reduction done by the
//! caller is independent of how the work was scheduled.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// Runs on the rayon pool; falls back to serial without the `parallel` feature.
    #[default]
    Parallel,
}

/// Maps `f` over `0..count`, returning the results in index order.
pub fn map_indexed<T, F>(count: u64, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..count).into_par_iter().map(f).collect(),
        _ => (0..count).map(f).collect(),
    }
}
