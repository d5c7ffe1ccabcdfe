//! Order-preserving data-parallel helpers. With the `parallel` feature they
//! run on rayon's pool; without it, or inside [`sequentially`], they are
//! plain loops on the calling thread.

use std::cell::Cell;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

pub fn map<T, R, F>(xs: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !FORCE_SEQUENTIAL.with(Cell::get) {
        return xs.par_iter().map(f).collect();
    }
    xs.iter().map(f).collect()
}

pub fn flat_map<T, R, F>(xs: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    map(xs, f).into_iter().flatten().collect()
}

/// Runs `f` with every helper called from this thread kept sequential.
pub fn sequentially<R>(f: impl FnOnce() -> R) -> R {
    let old = FORCE_SEQUENTIAL.with(|c| c.replace(true));
    let r = f();
    FORCE_SEQUENTIAL.with(|c| c.set(old));
    r
}

/// Whether the parallel backend is compiled in.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
