//! Replicates run on a rayon pool; each one draws from its own stream, so
//! results do not depend on the number of workers.

use lpp_core::RngStream;
use rayon::prelude::*;

use crate::error::{LabError, LabResult};

/// Stream id of replicate `rep` in parameter cell `cell`.
pub fn stream_id(cell: u32, rep: usize) -> u64 {
    (u64::from(cell) << 32) | rep as u64
}

/// Runs `f` for replicates `0..reps` of `cell` on `threads` workers
/// (0 = rayon's default) and returns the results in replicate order.
pub fn replicate<T, F>(threads: usize, seed: u64, cell: u32, reps: usize, f: F) -> LabResult<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> LabResult<T> + Sync,
{
    if reps > u32::MAX as usize {
        return Err(LabError::Config(format!("at most {} replicates per cell", u32::MAX)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| LabError::Internal(format!("cannot build worker pool: {e}")))?;
    pool.install(|| {
        (0..reps)
            .into_par_iter()
            .map(|k| f(&mut RngStream::new(seed, stream_id(cell, k))))
            .collect()
    })
}
