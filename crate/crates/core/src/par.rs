//! Order-preserving parallel helpers; sequential without the `parallel` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map<T, F>(items: &[usize], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(|&i| f(i)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(|&i| f(i)).collect()
    }
}

/// First `Some` in item order.
pub(crate) fn find_first<T, F>(items: &[usize], f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().find_map_first(|&i| f(i))
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().find_map(|&i| f(i))
    }
}
