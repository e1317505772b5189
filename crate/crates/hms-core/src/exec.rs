//! Data-parallel map over independent verification cases.
//!
//! With the `parallel` feature (default) this fans out over rayon's global
//! pool; without it the same call degrades to a plain sequential map. Output
//! order always matches input order, so reports are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map_cases<T, U, F>(cases: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    cases.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_cases<T, U, F>(cases: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    cases.iter().map(f).collect()
}

/// Sequential map with the same shape as [`map_cases`]; the bench suite uses
/// it as the baseline when comparing against the parallel path.
pub fn map_cases_seq<T, U, F>(cases: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    cases.iter().map(f).collect()
}
