//! Order-preserving map over independent work items, on the rayon pool when
//! the `parallel` feature is enabled and sequentially otherwise.

/// How independent work items (instances, sweep points, search branches) run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// Rayon worker pool; falls back to sequential without the `parallel`
    /// feature.
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Whether work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, returning results in input order regardless of
/// scheduling.
pub fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = exec;
    items.iter().map(f).collect()
}
