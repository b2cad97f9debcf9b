//! Thin indirection over rayon so the crate builds with or without the
//! `parallel` feature. Callers get deterministic output either way: results
//! are produced positionally (`map`) or re-sorted by the caller after a
//! parallel collect.

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order matches input order in both builds.
#[cfg(feature = "parallel")]
pub fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Runs `f` inside a rayon pool of `jobs` threads (0 = rayon default).
/// Without the `parallel` feature the job count is ignored.
#[cfg(feature = "parallel")]
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map(|pool| pool.install(f))
        .unwrap_or_else(|_| panic!("failed to build thread pool"))
}

#[cfg(not(feature = "parallel"))]
pub fn with_jobs<R>(_jobs: usize, f: impl FnOnce() -> R) -> R {
    f()
}
