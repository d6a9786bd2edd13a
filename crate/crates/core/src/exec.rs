//! Execution policy for the data-parallel loops (exhaustive enumeration,
//! uncertainty-ball sampling, Monte-Carlo trials).
//!
//! Every parallel path splits its index space into fixed chunks and reduces
//! the per-chunk results in chunk order, so the output never depends on the
//! number of worker threads. With the `parallel` feature disabled,
//! [`Execution::Parallel`] silently runs sequentially.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run work on more than one thread.
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Configure the global worker pool. `0` keeps the default (one thread per core).
///
/// Only the first call has an effect; later calls return an error string from
/// the pool builder which callers may ignore.
pub fn configure_threads(threads: usize) -> Result<(), String> {
    #[cfg(feature = "parallel")]
    {
        if threads == 0 {
            return Ok(());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(())
    }
}

fn chunk_ranges(len: u64, chunk: u64) -> Vec<Range<u64>> {
    let chunk = chunk.max(1);
    let mut out = Vec::with_capacity(len.div_ceil(chunk) as usize);
    let mut start = 0;
    while start < len {
        let end = (start + chunk).min(len);
        out.push(start..end);
        start = end;
    }
    out
}

/// Map every chunk of `0..len` and fold the results left-to-right in chunk order.
pub fn map_reduce_chunks<T, M, R>(
    exec: Execution,
    len: u64,
    chunk: u64,
    identity: T,
    map: M,
    reduce: R,
) -> T
where
    T: Send + Clone,
    M: Fn(Range<u64>) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let chunks = chunk_ranges(len, chunk);
    let partials: Vec<T> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            chunks.into_par_iter().map(&map).collect()
        }
        _ => chunks.into_iter().map(&map).collect(),
    };
    partials.into_iter().fold(identity, reduce)
}

/// Order-preserving map over a slice of work items.
pub fn map_collect<I, T, F>(exec: Execution, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range_exactly() {
        let r = chunk_ranges(10, 3);
        assert_eq!(r, vec![0..3, 3..6, 6..9, 9..10]);
        assert!(chunk_ranges(0, 4).is_empty());
    }

    #[test]
    fn both_policies_agree() {
        let sum = |e| map_reduce_chunks(e, 1000, 7, 0u64, |r| r.sum::<u64>(), |a, b| a + b);
        assert_eq!(sum(Execution::Sequential), 499_500);
        assert_eq!(sum(Execution::Parallel), 499_500);
        let sq = |e| map_collect(e, &[1, 2, 3], |v| v * v);
        assert_eq!(sq(Execution::Parallel), sq(Execution::Sequential));
    }
}
