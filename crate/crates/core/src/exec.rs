//! Order-preserving map used by the batch stages.
//!
//! With the `parallel` feature (default) work runs on a rayon pool sized by
//! the caller; without it, or with `threads == 1`, it runs inline.

/// Applies `f` to every item and returns results in input order.
pub fn ordered_map<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if threads > 1 && items.len() > 1 {
            use rayon::prelude::*;
            match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => return pool.install(|| items.par_iter().map(&f).collect()),
                Err(e) => log::warn!("falling back to sequential execution: {e}"),
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    items.iter().map(f).collect()
}
