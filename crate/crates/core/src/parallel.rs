//! Deterministic work splitting: results never depend on thread count or
//! schedule.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

/// Scans `0..total` in fixed-size chunks and returns `(i, value)` for the
/// least `i` where `eval` yields `Some`. `eval` must be pure; the outcome is
/// identical for every `threads` value.
pub(crate) fn first_hit<T, F>(total: u64, chunk: u64, threads: usize, eval: F) -> Option<(u64, T)>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync,
{
    if total == 0 {
        return None;
    }
    let threads = threads.max(1);
    if threads == 1 || total <= chunk {
        return (0..total).find_map(|i| eval(i).map(|v| (i, v)));
    }
    let num_chunks = total.div_ceil(chunk);
    let cursor = AtomicU64::new(0);
    let best: Mutex<Option<(u64, T)>> = Mutex::new(None);
    std::thread::scope(|scope| {
        let workers = threads.min(num_chunks as usize);
        for _ in 0..workers {
            scope.spawn(|| loop {
                let c = cursor.fetch_add(1, Ordering::Relaxed);
                if c >= num_chunks {
                    break;
                }
                // A hit in a lower chunk beats everything this chunk holds.
                if let Some((i, _)) = *best.lock().unwrap() {
                    if i < c * chunk {
                        continue;
                    }
                }
                let end = ((c + 1) * chunk).min(total);
                for i in c * chunk..end {
                    if let Some(v) = eval(i) {
                        let mut b = best.lock().unwrap();
                        if b.as_ref().map_or(true, |(j, _)| *j > i) {
                            *b = Some((i, v));
                        }
                        break;
                    }
                }
            });
        }
    });
    best.into_inner().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_least_index_regardless_of_threads() {
        let eval = |i: u64| if i % 97 == 41 { Some(i * 2) } else { None };
        let expected = (0..10_000).find_map(|i| eval(i).map(|v| (i, v)));
        for threads in [1, 2, 8] {
            assert_eq!(first_hit(10_000, 64, threads, eval), expected);
        }
        for threads in [1, 4] {
            assert_eq!(first_hit::<u64, _>(10_000, 64, threads, |_| None), None);
            assert_eq!(first_hit(0, 64, threads, eval), None);
        }
    }
}
