//! Batch execution helpers. With the `parallel` feature (on by default)
//! index-based batches fan out over rayon; results always come back in
//! index order, so outputs are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Always-sequential twin of [`map_indexed`], kept for benchmarking the
/// parallel speedup.
pub fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Index of the first item satisfying `pred`, in slice order.
pub fn position_first<T, F>(items: &[T], pred: F) -> Option<usize>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().position_first(|x| pred(x))
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().position(|x| pred(x))
    }
}
