use alloc::vec::Vec;

use crate::error::Result;

/// Runs independent indexed jobs; results come back in index order.
pub trait Executor: Sync {
    fn map(&self, n: usize, job: &(dyn Fn(usize) -> Result<f64> + Sync)) -> Vec<Result<f64>>;
}

/// Runs jobs one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map(&self, n: usize, job: &(dyn Fn(usize) -> Result<f64> + Sync)) -> Vec<Result<f64>> {
        (0..n).map(job).collect()
    }
}
