//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers run on the rayon global pool,
//! unless parallelism has been switched off at runtime with
//! [`set_parallel`]. Without the feature every helper is a plain loop.
//!
//! Every helper returns the same value in both modes. Reductions that
//! depend on summation order (`sum_range`) collect per-index terms and add
//! them left to right while [`is_deterministic`] holds, which is the
//! default.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};

static PARALLEL: AtomicBool = AtomicBool::new(true);
static DETERMINISTIC: AtomicBool = AtomicBool::new(true);

/// Below this many items a loop always runs sequentially.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 256;

/// Enables or disables parallel execution at runtime.
///
/// Has no effect when the crate is built without the `parallel` feature.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled, AtomicOrdering::Relaxed);
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(AtomicOrdering::Relaxed)
}

/// Fixes the order of floating-point reductions when `true` (the default).
pub fn set_deterministic(enabled: bool) {
    DETERMINISTIC.store(enabled, AtomicOrdering::Relaxed);
}

pub fn is_deterministic() -> bool {
    DETERMINISTIC.load(AtomicOrdering::Relaxed)
}

#[cfg(feature = "parallel")]
fn use_pool(n: usize) -> bool {
    n >= MIN_PARALLEL_LEN && is_parallel()
}

/// Evaluates `f` at `0..n` and returns the results in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_pool(n) {
        use rayon::prelude::*;
        return (0..n).into_par_iter().with_min_len(64).map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Applies `f` to every element of `items` together with its index.
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_pool(items.len()) {
        use rayon::prelude::*;
        items
            .par_iter_mut()
            .with_min_len(64)
            .enumerate()
            .for_each(|(i, x)| f(i, x));
        return;
    }
    items.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

/// Sum of `f(i)` over `0..n`.
pub fn sum_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_pool(n) {
        use rayon::prelude::*;
        if !is_deterministic() {
            return (0..n).into_par_iter().map(f).sum();
        }
        let terms: Vec<f64> = (0..n).into_par_iter().with_min_len(64).map(f).collect();
        return terms.iter().sum();
    }
    (0..n).map(f).sum()
}

/// Maximum of `f(i)` over `0..n` (`-inf` when `n == 0`).
pub fn max_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_pool(n) {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .map(f)
            .reduce(|| f64::NEG_INFINITY, f64::max);
    }
    (0..n).map(f).fold(f64::NEG_INFINITY, f64::max)
}

// Larger value wins, smaller index breaks ties. Total order, so the parallel
// reduction picks the same winner as the sequential scan.
fn better_max(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    match a.1.total_cmp(&b.1) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.0 <= b.0 {
                a
            } else {
                b
            }
        }
    }
}

fn better_min(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    match a.1.total_cmp(&b.1) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if a.0 <= b.0 {
                a
            } else {
                b
            }
        }
    }
}

/// Index and value of the largest `f(i)` among indices accepted by `keep`;
/// ties go to the smallest index.
pub fn argmax_filtered<K, F>(n: usize, keep: K, f: F) -> Option<(usize, f64)>
where
    K: Fn(usize) -> bool + Sync + Send,
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_pool(n) {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .with_min_len(64)
            .filter(|&i| keep(i))
            .map(|i| (i, f(i)))
            .reduce_with(better_max);
    }
    (0..n).filter(|&i| keep(i)).map(|i| (i, f(i))).reduce(better_max)
}

pub fn argmax_range<F>(n: usize, f: F) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    argmax_filtered(n, |_| true, f)
}

/// Index and value of the smallest `f(i)`; ties go to the smallest index.
pub fn argmin_range<F>(n: usize, f: F) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if use_pool(n) {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .with_min_len(64)
            .map(|i| (i, f(i)))
            .reduce_with(better_min);
    }
    (0..n).map(|i| (i, f(i))).reduce(better_min)
}
