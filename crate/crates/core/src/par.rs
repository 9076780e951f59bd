//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature (default) the work runs on rayon; without it
//! the same API runs sequentially. Results are always returned in input
//! order, so callers see identical output either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Apply `f` to each item, in parallel when the `parallel` feature is on.
/// Output order matches input order regardless of scheduling.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(|it| f(it)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(|it| f(it)).collect()
    }
}

/// Sequential map with the same signature as [`par_map`], always available.
/// Exists so benchmarks can compare the two paths in a single build.
pub fn seq_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(|it| f(it)).collect()
}

/// Run `f` inside a rayon pool restricted to `threads` workers; `0` keeps the
/// global default. Without the `parallel` feature the thread count is
/// irrelevant and `f` runs directly.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if threads == 0 {
            f()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("building a rayon pool with an explicit thread count cannot fail");
            pool.install(f)
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}
