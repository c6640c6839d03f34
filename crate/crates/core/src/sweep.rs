//! Data-parallel map used by randomized sweeps and the codec layers.
//!
//! With the `parallel` feature (default) work is spread over the rayon pool;
//! without it every helper runs sequentially. Results keep input order either
//! way, so outputs are identical across builds.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every item, preserving order.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    seq_map(items, f)
}

/// Sequential reference implementation of [`map`].
pub fn seq_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Maps `f` over `0..count`, preserving order.
pub fn map_range<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    map((0..count).collect(), f)
}

/// Fallible [`map_range`]: the first error in index order wins.
pub fn try_map_range<R, E, F>(count: usize, f: F) -> Result<Vec<R>, E>
where
    R: Send,
    E: Send,
    F: Fn(usize) -> Result<R, E> + Sync + Send,
{
    map_range(count, f).into_iter().collect()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let out = map_range(1000, |i| i * i);
        assert_eq!(out, (0..1000).map(|i| i * i).collect::<Vec<_>>());
        assert_eq!(map(vec![3, 1, 2], |x| x + 1), seq_map(vec![3, 1, 2], |x| x + 1));
    }

    #[test]
    fn first_error_in_order() {
        let r: Result<Vec<usize>, usize> = try_map_range(10, |i| if i % 4 == 3 { Err(i) } else { Ok(i) });
        assert_eq!(r, Err(3));
    }
}
