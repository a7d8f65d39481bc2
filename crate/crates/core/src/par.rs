//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the indexed maps run on rayon;
//! without it they run sequentially. Reductions compare `(value, index)`
//! lexicographically, so results and tie-breaks are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk size below which parallel dispatch is not worth it.
const PAR_MIN: usize = 64;

/// Cap the global worker pool at `n` threads. Returns false when the pool
/// was already initialized (or the crate was built without `parallel`).
pub fn set_threads(n: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        false
    }
}

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_indexed<T, F>(n: usize, sequential: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if !sequential && n >= PAR_MIN {
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = sequential;
    (0..n).map(f).collect()
}

/// Fallible variant of [`map_indexed`]; the reported error is the one with
/// the smallest index.
pub fn try_map_indexed<T, E, F>(n: usize, sequential: bool, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if !sequential && n >= PAR_MIN {
            let results: Vec<Result<T, E>> = (0..n).into_par_iter().map(f).collect();
            return results.into_iter().collect();
        }
    }
    let _ = sequential;
    (0..n).map(f).collect()
}

/// Index and value of the maximum entry; ties go to the smaller index.
pub fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// Fold `f(i)` over `0..n` under reducer `better` (true when the left
/// candidate wins, with ties already resolved toward smaller index by the
/// caller-supplied predicate). Deterministic under any thread schedule.
pub fn select_indexed<F, B>(n: usize, sequential: bool, f: F, better: B) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync + Send,
    B: Fn((usize, f64), (usize, f64)) -> bool + Sync + Send,
{
    if n == 0 {
        return None;
    }
    let pick = |a: (usize, f64), b: (usize, f64)| if better(a, b) { a } else { b };
    #[cfg(feature = "parallel")]
    {
        if !sequential && n >= PAR_MIN {
            return (0..n)
                .into_par_iter()
                .map(|i| (i, f(i)))
                .reduce_with(pick);
        }
    }
    let _ = sequential;
    (0..n).map(|i| (i, f(i))).reduce(pick)
}

/// Run `body` on each row of a row-major buffer, in parallel when available.
pub fn for_each_row<F>(buf: &mut [num_complex::Complex64], row_len: usize, body: F)
where
    F: Fn(usize, &mut [num_complex::Complex64]) + Sync + Send,
{
    if row_len == 0 {
        return;
    }
    debug_assert_eq!(buf.len() % row_len, 0);
    #[cfg(feature = "parallel")]
    {
        if buf.len() >= PAR_MIN * row_len.min(64) && buf.len() / row_len > 1 {
            buf.par_chunks_mut(row_len)
                .enumerate()
                .for_each(|(i, row)| body(i, row));
            return;
        }
    }
    for (i, row) in buf.chunks_mut(row_len).enumerate() {
        body(i, row);
    }
}
