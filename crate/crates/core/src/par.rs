//! Data-parallel facade with a sequential fallback.
//!
//! With the `parallel` feature (default) these helpers fan out on the rayon
//! global pool; without it they run plain loops with identical semantics and
//! identical output order, so results are deterministic either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over a slice, preserving order.
#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    items.par_iter().map(f).collect()
}

/// Map over a slice, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Map over `0..n`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_range<U: Send, F: Fn(usize) -> U + Sync + Send>(n: usize, f: F) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

/// Map over `0..n`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_range<U, F: Fn(usize) -> U>(n: usize, f: F) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Does the predicate hold for every index in `0..n`?
#[cfg(feature = "parallel")]
pub fn all_range<F: Fn(usize) -> bool + Sync + Send>(n: usize, f: F) -> bool {
    (0..n).into_par_iter().all(f)
}

/// Does the predicate hold for every index in `0..n`?
#[cfg(not(feature = "parallel"))]
pub fn all_range<F: Fn(usize) -> bool>(n: usize, f: F) -> bool {
    (0..n).all(f)
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn facade_matches_sequential_semantics() {
        let xs: Vec<u64> = (0..100).collect();
        assert_eq!(map_slice(&xs, |x| x * 2), (0..100).map(|x| x * 2).collect::<Vec<u64>>());
        assert_eq!(map_range(5, |i| i + 1), vec![1, 2, 3, 4, 5]);
        assert!(all_range(10, |i| i < 10));
        assert!(!all_range(10, |i| i < 9));
    }
}
