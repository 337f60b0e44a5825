//! Thread-pool runner for profile-indexed work.

use std::ops::Range;

use gamelab_core::RangeRunner;
use rayon::prelude::*;

/// Splits `0..len` into contiguous chunks processed on a dedicated pool.
/// Results come back in range order, so output does not depend on the
/// thread count.
pub struct RayonRunner {
    pool: rayon::ThreadPool,
    threads: usize,
}

impl RayonRunner {
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let threads = threads.max(1);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(RayonRunner { pool, threads })
    }

    pub fn threads(&self) -> usize {
        self.threads
    }
}

pub fn split(len: usize, pieces: usize) -> Vec<Range<usize>> {
    let pieces = pieces.clamp(1, len.max(1));
    (0..pieces).map(|k| len * k / pieces..len * (k + 1) / pieces).collect()
}

impl RangeRunner for RayonRunner {
    fn run<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync,
    {
        let ranges = split(len, self.threads * 4);
        self.pool.install(|| ranges.into_par_iter().map(&f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn split_covers_in_order(len in 0usize..500, pieces in 1usize..40) {
            let ranges = split(len, pieces);
            let flat: Vec<usize> = ranges.into_iter().flatten().collect();
            prop_assert_eq!(flat, (0..len).collect::<Vec<_>>());
        }
    }

    #[test]
    fn runner_preserves_order() {
        let runner = RayonRunner::new(3).unwrap();
        let out: Vec<usize> = runner.run(100, |r| r.collect::<Vec<_>>()).concat();
        assert_eq!(out, (0..100).collect::<Vec<_>>());
    }
}
