//! Data-parallel helpers with a sequential fallback.
//!
//! Without the `parallel` feature every [`Execution`] runs sequentially.
//! Callers get identical results either way: work items are indexed and
//! collected in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `(start..end).map(f).collect()`, possibly in parallel.
pub fn map_range<T, F>(exec: Execution, start: u64, end: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        // batches keep per-item scheduling cost below the cost of one draw
        #[cfg(feature = "parallel")]
        Execution::Parallel => (start as usize..end as usize)
            .into_par_iter()
            .with_min_len(256)
            .map(|k| f(k as u64))
            .collect(),
        _ => (start..end).map(f).collect(),
    }
}

/// Splits `start..end` into contiguous chunks, folds each with `fold`, and
/// combines chunk results left to right with `reduce`. `reduce` must be
/// associative for the result to be independent of the chunking.
pub fn fold_chunks<T, F, R>(exec: Execution, start: u64, end: u64, identity: T, fold: F, reduce: R) -> T
where
    T: Send + Sync + Clone,
    F: Fn(T, u64) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    const CHUNK: u64 = 1 << 12;
    let chunks = (end.saturating_sub(start)).div_ceil(CHUNK);
    let partial = map_range(exec, 0, chunks, |c| {
        let lo = start + c * CHUNK;
        let hi = (lo + CHUNK).min(end);
        (lo..hi).fold(identity.clone(), &fold)
    });
    partial.into_iter().fold(identity, reduce)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let a = map_range(Execution::Sequential, 3, 1000, |i| i * i);
        let b = map_range(Execution::Parallel, 3, 1000, |i| i * i);
        assert_eq!(a, b);
        let s = |e| fold_chunks(e, 0, 100_000, 0u64, |acc, i| acc + i, |a, b| a + b);
        assert_eq!(s(Execution::Sequential), s(Execution::Parallel));
        assert_eq!(s(Execution::Sequential), 100_000 * 99_999 / 2);
    }
}
