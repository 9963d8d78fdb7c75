//! Line-parallel execution. Each grid line is independent during flux
//! assembly, so lines are mapped over with per-worker scratch space.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecPolicy {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for ExecPolicy {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            ExecPolicy::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            ExecPolicy::Sequential
        }
    }
}

/// Splits `buf` into chunks of `chunk` elements, calls `f(line, scratch,
/// chunk)` on each, and reduces the returned speeds with `max`. On failure
/// the error of the lowest-numbered line wins, so the outcome does not
/// depend on scheduling.
pub(crate) fn map_lines<T, W, E, F>(
    policy: ExecPolicy,
    buf: &mut [T],
    chunk: usize,
    f: F,
) -> Result<f64, (usize, E)>
where
    T: Send,
    W: Default + Send,
    E: Send,
    F: Fn(usize, &mut W, &mut [T]) -> Result<f64, E> + Sync + Send,
{
    match policy {
        ExecPolicy::Sequential => {
            let mut w = W::default();
            let mut best = 0.0f64;
            for (line, c) in buf.chunks_mut(chunk).enumerate() {
                best = best.max(f(line, &mut w, c).map_err(|e| (line, e))?);
            }
            Ok(best)
        }
        #[cfg(feature = "parallel")]
        ExecPolicy::Parallel => buf
            .par_chunks_mut(chunk)
            .enumerate()
            .map_init(W::default, |w, (line, c)| f(line, w, c).map_err(|e| (line, e)))
            .reduce(|| Ok(0.0), merge),
    }
}

#[cfg(feature = "parallel")]
fn merge<E>(a: Result<f64, (usize, E)>, b: Result<f64, (usize, E)>) -> Result<f64, (usize, E)> {
    match (a, b) {
        (Ok(x), Ok(y)) => Ok(x.max(y)),
        (Err(e), Ok(_)) | (Ok(_), Err(e)) => Err(e),
        (Err(e1), Err(e2)) => Err(if e1.0 <= e2.0 { e1 } else { e2 }),
    }
}

/// Applies `f` to each chunk without a result.
pub(crate) fn for_each_chunk<T, F>(policy: ExecPolicy, buf: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    match policy {
        ExecPolicy::Sequential => buf.chunks_mut(chunk).enumerate().for_each(|(k, c)| f(k, c)),
        #[cfg(feature = "parallel")]
        ExecPolicy::Parallel => buf.par_chunks_mut(chunk).enumerate().for_each(|(k, c)| f(k, c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(policy: ExecPolicy) -> Result<f64, (usize, &'static str)> {
        let mut buf = vec![0.0f64; 40];
        map_lines(policy, &mut buf, 4, |line, w: &mut usize, c: &mut [f64]| {
            *w += 1;
            c.fill(line as f64);
            if line == 7 || line == 3 {
                Err("bad line")
            } else {
                Ok(line as f64 * 0.5)
            }
        })
    }

    #[test]
    fn lowest_failing_line_reported() {
        assert_eq!(run(ExecPolicy::Sequential), Err((3, "bad line")));
        assert_eq!(run(ExecPolicy::default()), Err((3, "bad line")));
    }

    #[test]
    fn max_speed_reduction() {
        let mut buf = vec![0.0f64; 12];
        let r = map_lines(ExecPolicy::default(), &mut buf, 3, |line, _: &mut (), _c: &mut [f64]| {
            Ok::<_, ()>(line as f64)
        });
        assert_eq!(r, Ok(3.0));
    }
}
