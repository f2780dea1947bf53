//! Order-preserving data-parallel maps with a sequential fallback.
//!
//! With the `parallel` feature the work runs on the rayon pool when the
//! caller asks for it; without the feature every call is sequential. The
//! output order never depends on scheduling.

/// `f(0), …, f(n - 1)`.
pub fn map_indexed<R, F>(n: usize, parallel: bool, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}

/// `f` applied to every item.
pub fn map_slice<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_indexed(items.len(), parallel, |i| f(&items[i]))
}

/// Whether parallel execution is compiled in.
pub const fn available() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_indexed(1000, false, |i| i * i);
        let par = map_indexed(1000, true, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(map_slice(&[3, 1, 2], true, |x| x + 1), vec![4, 2, 3]);
    }
}
