use qscd_core::training::Executor;
use qscd_core::Result;
use rayon::prelude::*;

/// Spreads finite-difference jobs over a rayon pool.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    /// `threads = None` uses every available core.
    pub fn new(threads: Option<usize>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n.max(1));
        }
        Ok(Self { pool: builder.build()? })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map(&self, n: usize, job: &(dyn Fn(usize) -> Result<f64> + Sync)) -> Vec<Result<f64>> {
        self.pool.install(|| (0..n).into_par_iter().map(job).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qscd_core::training::Sequential;

    #[test]
    fn same_results_as_sequential() {
        let job = |i: usize| Ok((i as f64).sqrt().sin());
        let par = RayonExecutor::new(Some(3)).unwrap();
        assert_eq!(par.threads(), 3);
        assert_eq!(par.map(100, &job), Sequential.map(100, &job));
    }
}
