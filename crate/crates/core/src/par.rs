//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers dispatch through rayon; without it
//! they run as plain iterators. Callers never observe a difference in output:
//! every helper returns results in index order.

/// Execution strategy for replicate loops and per-layer sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// True when work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Evaluate `f` on `0..len` and collect the results in index order.
pub fn map_indexed<T, F>(mode: ExecMode, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..len).map(f).collect()
}

/// Fill `out[i] = f(start + i)` for each slot, in parallel chunks when enabled.
pub fn fill_indexed<T, F>(mode: ExecMode, out: &mut [T], start: usize, chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        out.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, slot)| f(start + i * chunk, slot));
        return;
    }
    let _ = mode;
    for (i, slot) in out.chunks_mut(chunk).enumerate() {
        f(start + i * chunk, slot);
    }
}

/// Number of worker threads the current pool would use.
pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
