//! Execution mode for the data-parallel kernels.
//!
//! Every hot loop in the crate (amplitude updates, exhaustive input sweeps,
//! randomized-benchmarking sequences) goes through the helpers here. With the
//! `parallel` feature enabled they fan out over rayon; without it, or when
//! [`Exec::Sequential`] is requested, they run on the calling thread. Results
//! are identical in both modes: work items never share mutable state and
//! random streams are derived per item.

/// How a data-parallel loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is compiled in, otherwise
    /// behaves like `Sequential`.
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

impl Exec {
    /// True when this mode will actually spawn rayon work.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Evaluate `f(i)` for `i in 0..n`, preserving index order in the output.
pub fn map_range<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
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

/// Run `f(offset, chunk)` over consecutive `chunk_len`-sized pieces of `data`.
pub(crate) fn for_each_chunk_mut<T, F>(exec: Exec, data: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && data.len() >= PAR_MIN_LEN && data.len() / chunk_len > 1 {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk_len)
            .enumerate()
            .for_each(|(k, c)| f(k * chunk_len, c));
        return;
    }
    let _ = exec;
    for (k, c) in data.chunks_mut(chunk_len).enumerate() {
        f(k * chunk_len, c);
    }
}

/// Below this many elements the rayon split costs more than it saves.
#[cfg(feature = "parallel")]
const PAR_MIN_LEN: usize = 1 << 14;
