//! Data-parallel execution helpers.
//!
//! Per-node statistics and benchmark cells are independent units of work.
//! With the `parallel` feature (default) they fan out across a rayon pool;
//! without it, or when a caller forces [`ExecMode::Sequential`], the same
//! closures run on one thread. Results are always collected in input order
//! and reduced sequentially, so both modes produce identical output.

/// How independent work units are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    /// Fan out across the rayon pool (requires the `parallel` feature;
    /// degrades to sequential without it).
    Parallel,
    /// Run on the calling thread, e.g. for low-noise timing runs.
    Sequential,
}

impl Default for ExecMode {
    fn default() -> Self {
        ExecMode::Parallel
    }
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Maps `f` over `0..n`, collecting results in index order.
pub fn map_indexed<T, F>(n: usize, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Maps `f` over `0..n` with a reusable per-worker scratch value, collecting
/// results in index order.
pub fn map_indexed_with_scratch<T, S, FS, F>(n: usize, mode: ExecMode, make_scratch: FS, f: F) -> Vec<T>
where
    T: Send,
    FS: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .map_init(&make_scratch, |scratch, i| f(scratch, i))
            .collect();
    }
    let _ = mode;
    let mut scratch = make_scratch();
    (0..n).map(|i| f(&mut scratch, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let par = map_indexed(100, ExecMode::Parallel, |i| i * i);
        let seq = map_indexed(100, ExecMode::Sequential, |i| i * i);
        assert_eq!(par, seq);
    }

    #[test]
    fn scratch_variant_agrees() {
        let f = |buf: &mut Vec<usize>, i: usize| {
            buf.clear();
            buf.extend(0..i % 5);
            buf.len() * 100 + i
        };
        let par = map_indexed_with_scratch(50, ExecMode::Parallel, Vec::new, f);
        let seq = map_indexed_with_scratch(50, ExecMode::Sequential, Vec::new, f);
        assert_eq!(par, seq);
    }
}
