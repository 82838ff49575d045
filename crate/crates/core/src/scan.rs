use std::ops::ControlFlow;

use rayon::prelude::*;

/// Evaluates `eval` over `from..=to` in parallel chunks and feeds the results
/// to `visit` in increasing order until it breaks. Values past the break
/// point within a chunk are discarded, so output does not depend on the
/// number of worker threads.
pub(crate) fn scan_ordered<T, E>(
    from: u64,
    to: u64,
    eval: impl Fn(u64) -> Result<T, E> + Sync,
    mut visit: impl FnMut(u64, T) -> ControlFlow<()>,
) -> Result<(), E>
where
    T: Send,
    E: Send,
{
    let chunk = (rayon::current_num_threads() as u64).max(1) * 8;
    let mut start = from;
    while start <= to {
        let end = to.min(start.saturating_add(chunk - 1));
        let results: Vec<Result<T, E>> = (start..=end).into_par_iter().map(&eval).collect();
        for (i, r) in results.into_iter().enumerate() {
            if visit(start + i as u64, r?).is_break() {
                return Ok(());
            }
        }
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    Ok(())
}
