use crate::error::Result;

/// Runs `f` for every trial index and returns the outputs in index order, so
/// any aggregation over them is independent of scheduling.
#[cfg(feature = "parallel")]
pub(crate) fn map_trials<T, F>(trials: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..trials).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_trials<T, F>(trials: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T>,
{
    (0..trials).map(f).collect()
}
