//! Data-parallel map with a sequential fallback.
//!
//! Sweeps over `alpha` grids, flow-trace time points, and verdict suites are
//! embarrassingly parallel.  With the `parallel` feature (default) they fan
//! out through rayon; without it the same entry points run sequentially.
//! Output order is the input order in both modes, so results are
//! bit-identical regardless of thread count.

/// Order-preserving parallel map.
#[cfg(feature = "parallel")]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

/// Order-preserving parallel map (sequential fallback).
#[cfg(not(feature = "parallel"))]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Caps the global worker pool (no-op without the `parallel` feature, or
/// once a pool already exists).
#[cfg(feature = "parallel")]
pub fn set_threads(n: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

/// Caps the global worker pool (no-op without the `parallel` feature).
#[cfg(not(feature = "parallel"))]
pub fn set_threads(_n: usize) {}

/// Sequential map with the same signature as [`par_map`]; kept available in
/// all configurations so benchmarks can compare the two paths directly.
pub fn seq_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}
