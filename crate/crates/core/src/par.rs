//! Replica-level parallelism.
//!
//! With the `parallel` feature (default) independent work items are spread
//! over the rayon pool; without it every call runs sequentially. Results are
//! always returned in input order, so reductions over them are reproducible
//! regardless of the execution mode.

/// How to execute a batch of independent work items.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// `true` when this build can actually run work items concurrently.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Apply `f` to every item, preserving order.
pub fn map_ordered<I, T, F>(items: &[I], mode: ExecMode, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Apply `f` to every index in `range`, preserving order.
pub fn map_range<T, F>(range: std::ops::Range<u64>, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = mode;
    range.map(f).collect()
}

/// Cap the global worker count. Returns `false` if the pool was already
/// initialised (or the build is sequential).
pub fn init_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let a = map_range(0..100, ExecMode::Sequential, |i| i * i);
        let b = map_range(0..100, ExecMode::Parallel, |i| i * i);
        assert_eq!(a, b);
        let items: Vec<u64> = (0..50).collect();
        let c = map_ordered(&items, ExecMode::Parallel, |&i| i + 1);
        assert_eq!(c, (1..51).collect::<Vec<_>>());
    }
}
