//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the parallel mode runs on the
//! rayon global pool. Without it every mode runs sequentially. Results never
//! depend on the mode: searches always report the lowest-index hit.

/// How embarrassingly parallel loops are executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `0..n` and collects the results in index order.
pub fn map_collect<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Returns `f(i)` for the least `i` in `0..n` where it is `Some`.
pub fn find_map_first<T, F>(exec: Execution, n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().find_map_first(f);
    }
    let _ = exec;
    (0..n).find_map(f)
}

/// `true` iff `f(i)` holds for every `i` in `0..n`.
pub fn all<F>(exec: Execution, n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_map_first(exec, n, |i| (!f(i)).then_some(())).is_none()
}
