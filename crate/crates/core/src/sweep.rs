//! Ordered evaluation of a function over an inclusive range of `n`.
//!
//! With the `parallel` feature (on by default) work is spread over a rayon
//! pool of the requested size; without it, or with a single worker, the
//! range is walked sequentially. Results always come back in order of `n`,
//! so output never depends on the worker count.

use std::num::NonZeroUsize;

/// Worker count used when the caller does not pick one.
pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
}

pub fn map_range<T, F>(lo: u64, hi: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers > 1 {
        return map_range_parallel(lo, hi, workers, f);
    }
    let _ = workers;
    map_range_sequential(lo, hi, f)
}

pub fn map_range_sequential<T, F>(lo: u64, hi: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    if lo > hi {
        return Vec::new();
    }
    (lo..=hi).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_range_parallel<T, F>(lo: u64, hi: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;

    if lo > hi {
        return Vec::new();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("failed to start worker pool");
    pool.install(|| (lo..=hi).into_par_iter().map(f).collect())
}

/// Like [`map_range`] over an explicit list of inputs; output follows input order.
pub fn map_items<T, F>(items: &[u64], workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers > 1 {
        use rayon::prelude::*;

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("failed to start worker pool");
        return pool.install(|| items.par_iter().map(|&n| f(n)).collect());
    }
    let _ = workers;
    items.iter().map(|&n| f(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_workers() {
        let expected: Vec<u64> = (5..=500).map(|n| n * n % 97).collect();
        for workers in [1, 2, 3, 8] {
            assert_eq!(map_range(5, 500, workers, |n| n * n % 97), expected);
        }
    }

    #[test]
    fn empty_and_singleton_ranges() {
        assert!(map_range(3, 2, 4, |n| n).is_empty());
        assert_eq!(map_range(7, 7, 4, |n| n), vec![7]);
    }

    #[test]
    fn items_keep_input_order() {
        let items = [9, 3, 27, 1, 81];
        for workers in [1, 4] {
            assert_eq!(
                map_items(&items, workers, |n| n + 1),
                vec![10, 4, 28, 2, 82]
            );
        }
    }
}
