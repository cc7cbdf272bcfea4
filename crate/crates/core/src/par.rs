//! Execution strategy for data-parallel loops.
//!
//! With the `parallel` feature the helpers dispatch to rayon when asked for
//! [`Exec::Parallel`]; without it every call runs sequentially. Results are
//! identical either way: maps preserve order and searches return the first
//! match in iteration order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

pub fn map<T, U, F>(exec: Exec, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send + Sync,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.into_par_iter().map(f).collect(),
        _ => items.into_iter().map(f).collect(),
    }
}

/// Applies `f` to `0..count` and returns the result for the smallest index
/// where it is `Some`.
pub fn find_first_index<U, F>(exec: Exec, count: u64, f: F) -> Option<U>
where
    U: Send,
    F: Fn(u64) -> Option<U> + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..count).into_par_iter().find_map_first(f),
        _ => (0..count).find_map(f),
    }
}

/// Indices in `0..count` where `keep` holds, in increasing order.
pub fn filter_indices<F>(exec: Exec, count: u64, keep: F) -> Vec<u64>
where
    F: Fn(u64) -> bool + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..count).into_par_iter().filter(|&i| keep(i)).collect(),
        _ => (0..count).filter(|&i| keep(i)).collect(),
    }
}

/// Order-preserving `filter_map` over `0..count`.
pub fn filter_map_indices<U, F>(exec: Exec, count: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> Option<U> + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..count).into_par_iter().filter_map(f).collect(),
        _ => (0..count).filter_map(f).collect(),
    }
}
