//! Threaded search driver: farms top-level subtrees to a worker pool and
//! merges deterministically, so status, witness and node count are
//! byte-identical to the serial run regardless of thread count or worker
//! schedule. Once some branch finds a witness, workers abandon strictly
//! later branches; their placeholder outcomes are never consumed by the
//! merge.

use movoid_core::search::{BranchOutcome, SearchEngine, SearchError, SearchOutcome};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Runs a search with the given worker count and optional wall-clock
/// deadline.
pub fn run_search(
    engine: &SearchEngine,
    threads: usize,
    deadline: Option<Instant>,
) -> Result<SearchOutcome, SearchError> {
    let expired = || deadline.is_some_and(|d| Instant::now() >= d);
    if threads <= 1 {
        return engine.run(&mut || expired());
    }
    let branches = engine.branch_count()?;
    if branches <= 1 {
        return engine.run(&mut || expired());
    }
    let next = AtomicUsize::new(0);
    let best_found = AtomicUsize::new(usize::MAX);
    let outcomes: Mutex<Vec<Option<BranchOutcome>>> = Mutex::new(vec![None; branches]);
    let first_err: Mutex<Option<SearchError>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..threads.min(branches) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= branches {
                    return;
                }
                if best_found.load(Ordering::SeqCst) < i {
                    // a smaller branch already found a witness; this
                    // branch can never be reached by the serial order
                    outcomes.lock().unwrap()[i] =
                        Some(BranchOutcome { nodes: 0, found: None, stopped: true });
                    continue;
                }
                let mut stop = || expired() || best_found.load(Ordering::SeqCst) < i;
                match engine.run_branch(i, &mut stop) {
                    Ok(out) => {
                        if out.found.is_some() {
                            best_found.fetch_min(i, Ordering::SeqCst);
                        }
                        outcomes.lock().unwrap()[i] = Some(out);
                    }
                    Err(e) => {
                        let mut slot = first_err.lock().unwrap();
                        if slot.is_none() {
                            *slot = Some(e);
                        }
                        return;
                    }
                }
            });
        }
    });

    if let Some(e) = first_err.into_inner().unwrap() {
        return Err(e);
    }
    let outcomes: Vec<BranchOutcome> = outcomes
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|o| o.expect("all branches visited"))
        .collect();
    engine.merge(&outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use movoid_core::gf::Field;
    use movoid_core::quadric::{Caps, Quadric};
    use movoid_core::search::{SearchProblem, SearchStatus};

    #[test]
    fn parallel_matches_serial() {
        let qd = Quadric::new(Field::new(3).unwrap(), 1, &Caps::default()).unwrap();
        for m in [0i64, 1] {
            let engine =
                SearchEngine::new(&qd, SearchProblem::m_ovoid(m), Caps::default()).unwrap();
            let serial = run_search(&engine, 1, None).unwrap();
            let par = run_search(&engine, 4, None).unwrap();
            assert_eq!(serial.status, par.status);
            assert_eq!(serial.nodes, par.nodes);
            assert_eq!(serial.witness, par.witness);
        }
    }

    #[test]
    fn parallel_exhaustion_matches() {
        let qd = Quadric::new(Field::new(2).unwrap(), 2, &Caps::default()).unwrap();
        let engine = SearchEngine::new(&qd, SearchProblem::m_ovoid(1), Caps::default()).unwrap();
        let serial = run_search(&engine, 1, None).unwrap();
        let par = run_search(&engine, 3, None).unwrap();
        assert_eq!(serial.status, SearchStatus::ExhaustedNone);
        assert_eq!(par.status, SearchStatus::ExhaustedNone);
        assert_eq!(serial.nodes, par.nodes);
    }
}
