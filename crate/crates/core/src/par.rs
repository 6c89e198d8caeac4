//! Data-parallel helpers. With the `parallel` feature these dispatch to
//! rayon; without it they run the same closures sequentially. Every caller
//! produces output that does not depend on which path ran.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    items.par_iter().flat_map_iter(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> Vec<U>,
{
    items.iter().flat_map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn sort_unstable<T: Ord + Send>(v: &mut [T]) {
    v.par_sort_unstable();
}

#[cfg(not(feature = "parallel"))]
pub fn sort_unstable<T: Ord>(v: &mut [T]) {
    v.sort_unstable();
}

#[cfg(feature = "parallel")]
pub fn sort_by_key<T, K, F>(v: &mut [T], f: F)
where
    T: Send,
    K: Ord,
    F: Fn(&T) -> K + Sync,
{
    v.par_sort_by_key(f);
}

#[cfg(not(feature = "parallel"))]
pub fn sort_by_key<T, K, F>(v: &mut [T], f: F)
where
    K: Ord,
    F: Fn(&T) -> K,
{
    v.sort_by_key(f);
}

/// Sum of `f` over `items`.
#[cfg(feature = "parallel")]
pub fn sum<T, F>(items: &[T], f: F) -> u64
where
    T: Sync,
    F: Fn(&T) -> u64 + Sync + Send,
{
    items.par_iter().map(f).sum()
}

#[cfg(not(feature = "parallel"))]
pub fn sum<T, F>(items: &[T], f: F) -> u64
where
    F: Fn(&T) -> u64,
{
    items.iter().map(f).sum()
}

/// Worker count used to size parallel batches.
pub fn width() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
