//! Data-parallel execution helpers.
//!
//! All embarrassingly parallel loops in this crate (Monte Carlo comparison
//! batches, per-K classifier fits, repeated experiment runs) go through
//! [`map_indexed`]. With the `parallel` feature (default) it fans out over
//! rayon; without it, it is a plain sequential map. Callers must pass pure
//! functions of the index so both modes produce identical output.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with data-parallel execution disabled on the calling thread.
///
/// Useful for benchmarking the sequential path against the parallel one in
/// the same build, and for verifying that both produce identical results.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    FORCE_SEQUENTIAL.with(|flag| {
        let prev = flag.replace(true);
        let out = f();
        flag.set(prev);
        out
    })
}

pub(crate) fn forced_sequential() -> bool {
    FORCE_SEQUENTIAL.with(|flag| flag.get())
}

/// Maps `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if forced_sequential() {
        (0..n).map(f).collect()
    } else {
        (0..n).into_par_iter().map(f).collect()
    }
}

/// Maps `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let _ = forced_sequential();
    (0..n).map(f).collect()
}
