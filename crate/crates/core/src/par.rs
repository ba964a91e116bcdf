//! Data-parallel maps with a sequential fallback.
//!
//! Results are always collected in index order, so the output does not
//! depend on the number of worker threads.

/// Name of the environment variable that caps worker threads.
pub const THREADS_ENV: &str = "HOPSET_THREADS";

#[cfg(feature = "parallel")]
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    map_range(items.len(), |i| f(&items[i]))
}

/// Reads `HOPSET_THREADS` and sizes the global pool accordingly.
/// Returns the thread count that was requested, if any.
pub fn init_from_env() -> Option<usize> {
    let n = std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok()?;
    let n = n.max(1);
    #[cfg(feature = "parallel")]
    {
        // A second initialisation attempt (tests, repeated CLI calls in one
        // process) is harmless; the first configuration wins.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Some(n)
}

/// Runs `f` on a dedicated pool with `threads` workers.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v = map_range(100, |i| i * i);
        assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
        let one = with_threads(1, || map_range(10, |i| i + 1));
        let many = with_threads(4, || map_range(10, |i| i + 1));
        assert_eq!(one, many);
    }
}
