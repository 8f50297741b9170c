//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the helpers fan out over the
//! rayon pool; without it, or inside [`sequential`], they run on the calling
//! thread. Every helper combines per-item results with an associative
//! reduction in index order, so the output never depends on scheduling.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with every helper in this module forced onto the sequential path.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    struct Reset(bool);
    impl Drop for Reset {
        fn drop(&mut self) {
            FORCE_SEQUENTIAL.with(|c| c.set(self.0));
        }
    }
    let previous = FORCE_SEQUENTIAL.with(|c| c.replace(true));
    let _reset = Reset(previous);
    f()
}

/// Whether the helpers would currently run in parallel.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(|c| c.get())
}

/// Runs `f` on a dedicated pool of `jobs` workers (ignored without the
/// `parallel` feature). `jobs == 0` means the default pool.
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(f);
            }
        }
    }
    let _ = jobs;
    f()
}

/// Counts the indices in `0..count` for which `test` holds. `init` builds
/// per-worker scratch state.
pub fn count<S, I, F>(count: u64, init: I, test: F) -> u64
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> bool + Sync + Send,
{
    sum(count, init, |s, i| u64::from(test(s, i)))
}

/// Sums `value(i)` over `0..count`.
pub fn sum<S, I, F>(count: u64, init: I, value: F) -> u64
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return (0..count)
            .into_par_iter()
            .map_init(&init, |s, i| value(s, i))
            .sum();
    }
    let mut state = init();
    (0..count).map(|i| value(&mut state, i)).sum()
}

/// Maps `0..count` to a vector, preserving index order.
pub fn map<T, S, I, F>(count: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return (0..count)
            .into_par_iter()
            .map_init(&init, |s, i| f(s, i))
            .collect();
    }
    let mut state = init();
    (0..count).map(|i| f(&mut state, i)).collect()
}

/// Calls `f(chunk_index, chunk)` for each `chunk_len`-sized piece of `data`.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk_len = chunk_len.max(1);
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk_len)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
        return;
    }
    data.chunks_mut(chunk_len)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let f = |_: &mut (), i: u64| i % 7 == 3;
        let par = count(10_000, || (), f);
        let seq = sequential(|| count(10_000, || (), f));
        assert_eq!(par, seq);
        let v = map(100, || (), |_, i| i * i);
        assert_eq!(v[9], 81);
    }

    #[test]
    fn sequential_flag_is_scoped() {
        sequential(|| assert!(!is_parallel()));
        assert_eq!(is_parallel(), cfg!(feature = "parallel"));
    }
}
