//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper produces output in index order and splits reductions into
//! fixed-size chunks whose partial results are combined sequentially, so
//! results are bit-identical whether the work runs on one thread or many.
//! Parallel execution needs the `parallel` feature; without it, or after
//! `set_exec(Exec::Sequential)`, everything runs on the calling thread.

use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length used for all floating-point reductions.
pub const REDUCE_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

static SEQUENTIAL: AtomicBool = AtomicBool::new(false);

pub fn set_exec(exec: Exec) {
    SEQUENTIAL.store(exec == Exec::Sequential, Ordering::SeqCst);
}

pub fn exec() -> Exec {
    if parallel_enabled() {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}

#[inline]
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && !SEQUENTIAL.load(Ordering::Relaxed)
}

/// `(0..n).map(f)` collected in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() && n > 1 {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// `items.iter().map(f)` collected in order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() && items.len() > 1 {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Sum of `f(x)` over `items`, chunked for reproducibility.
pub fn chunked_sum<S, F>(items: &[S], f: F) -> f64
where
    S: Sync,
    F: Fn(&S) -> f64 + Sync + Send,
{
    let partial = |chunk: &[S]| chunk.iter().map(&f).sum::<f64>();
    #[cfg(feature = "parallel")]
    if parallel_enabled() && items.len() > REDUCE_CHUNK {
        let parts: Vec<f64> = items.par_chunks(REDUCE_CHUNK).map(partial).collect();
        return parts.iter().sum();
    }
    let parts: Vec<f64> = items.chunks(REDUCE_CHUNK).map(partial).collect();
    parts.iter().sum()
}

/// Applies `f` to each element in place.
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(&mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() && items.len() > REDUCE_CHUNK {
        items.par_chunks_mut(REDUCE_CHUNK).for_each(|c| c.iter_mut().for_each(&f));
        return;
    }
    items.iter_mut().for_each(f);
}

/// In-place unnormalized Walsh–Hadamard butterfly over a power-of-two slice.
pub fn hadamard_in_place(data: &mut [f64]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "length must be a power of two");
    let block = REDUCE_CHUNK.min(n);
    // stages that fit inside one block
    let inner = |chunk: &mut [f64]| {
        let mut h = 1;
        while h < chunk.len() {
            for pair in chunk.chunks_exact_mut(2 * h) {
                let (a, b) = pair.split_at_mut(h);
                butterfly(a, b);
            }
            h *= 2;
        }
    };
    #[cfg(feature = "parallel")]
    let par = parallel_enabled() && n > block;
    #[cfg(not(feature = "parallel"))]
    let par = false;

    if par {
        #[cfg(feature = "parallel")]
        data.par_chunks_mut(block).for_each(inner);
    } else {
        data.chunks_mut(block).for_each(inner);
    }
    let mut h = block;
    while h < n {
        for pair in data.chunks_exact_mut(2 * h) {
            let (a, b) = pair.split_at_mut(h);
            if par {
                #[cfg(feature = "parallel")]
                a.par_chunks_mut(block)
                    .zip(b.par_chunks_mut(block))
                    .for_each(|(x, y)| butterfly(x, y));
            } else {
                butterfly(a, b);
            }
        }
        h *= 2;
    }
}

#[inline]
fn butterfly(a: &mut [f64], b: &mut [f64]) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (s, d) = (*x + *y, *x - *y);
        *x = s;
        *y = d;
    }
}
