//! Runtime choice between the rayon-parallel and the sequential code paths.
//!
//! Both paths perform the same per-item work in the same order within each
//! item, so results are bitwise identical. Without the `parallel` feature
//! [`Execution::Parallel`] silently runs sequentially.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

impl std::str::FromStr for Execution {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "sequential" | "seq" => Ok(Execution::Sequential),
            "parallel" | "par" => Ok(Execution::Parallel),
            other => Err(crate::Error::Parse(format!(
                "unknown execution mode {other:?}"
            ))),
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_ordered<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Runs `f` on each chunk of `data`, passing the chunk index.
pub fn for_each_chunk_mut<T, F>(exec: Execution, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
        return;
    }
    let _ = exec;
    data.chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
}

/// Like [`for_each_chunk_mut`] but fallible. Every chunk is processed; the
/// error of the lowest-indexed failing chunk is returned.
pub fn try_for_each_chunk_mut<T, E, F>(
    exec: Execution,
    data: &mut [T],
    chunk: usize,
    f: F,
) -> Result<(), E>
where
    T: Send,
    E: Send,
    F: Fn(usize, &mut [T]) -> Result<(), E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        let results: Vec<Result<(), E>> = data
            .par_chunks_mut(chunk)
            .enumerate()
            .map(|(i, c)| f(i, c))
            .collect();
        return results.into_iter().collect();
    }
    let _ = exec;
    let results: Vec<Result<(), E>> = data
        .chunks_mut(chunk)
        .enumerate()
        .map(|(i, c)| f(i, c))
        .collect();
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map_ordered(Execution::Sequential, &xs, |x| x * x);
        let b = map_ordered(Execution::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        let mut u = vec![0usize; 100];
        let mut v = vec![0usize; 100];
        for_each_chunk_mut(Execution::Sequential, &mut u, 7, |i, c| c.fill(i));
        for_each_chunk_mut(Execution::Parallel, &mut v, 7, |i, c| c.fill(i));
        assert_eq!(u, v);
    }

    #[test]
    fn first_failing_chunk_wins() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let mut data = vec![0u8; 50];
            let r = try_for_each_chunk_mut(exec, &mut data, 10, |i, c| {
                c.fill(1);
                if i >= 2 {
                    Err(i)
                } else {
                    Ok(())
                }
            });
            assert_eq!(r, Err(2));
            assert!(data.iter().all(|&b| b == 1));
        }
    }
}
