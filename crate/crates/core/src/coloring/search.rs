//! Least-seed search for the Wirtinger number.
//!
//! For k = 1, 2, … the search looks for k seeds whose closure is every
//! strand. It runs depth-first over *stalled* states: from a closed set with
//! budget r it tries each uncolored strand (ascending) as the next seed and
//! closes again. A closed set that has already failed with budget ≥ r is
//! skipped; the failure table persists across k, because a set that cannot
//! be finished with r more seeds cannot be finished with r more seeds at any
//! larger k either.
//!
//! Successes are never pruned, so the first success in DFS order is the
//! lexicographically least successful seed sequence. The parallel path runs
//! one task per first seed and keeps the least successful first seed, which
//! yields the same sequence.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use super::{propagate, Certificate, Incidence};
use crate::diagram::{Diagram, StrandId};
use crate::strand_set::StrandSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest k to try; `None` means up to the strand count.
    pub max_k: Option<usize>,
    pub time_limit: Option<Duration>,
    /// Split first-seed branches across threads. Ignored without the
    /// `parallel` feature.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_k: None, time_limit: None, parallel: true }
    }
}

impl SearchOptions {
    pub fn sequential() -> Self {
        SearchOptions { parallel: false, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SearchStatus {
    /// `k` is the Wirtinger number and a certificate is attached.
    Exact,
    /// Every value below `k` was ruled out; the search stopped before
    /// settling `k` itself (time limit or `max_k`).
    LowerBoundOnly,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub k: usize,
    pub certificate: Option<Certificate>,
    pub elapsed: Duration,
    pub nodes_explored: u64,
}

impl SearchOutcome {
    pub fn is_exact(&self) -> bool {
        self.status == SearchStatus::Exact
    }
}

enum Dfs {
    Found(Vec<usize>),
    Failed,
    Aborted,
}

struct Searcher<'a> {
    inc: &'a Incidence,
    deadline: Option<Instant>,
    timed_out: AtomicBool,
    nodes: AtomicU64,
    failed: FailureTable,
}

impl Searcher<'_> {
    fn out_of_time(&self) -> bool {
        if self.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        match self.deadline {
            Some(t) if Instant::now() >= t => {
                self.timed_out.store(true, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }

    /// DFS from a closed `set` with `budget` seeds left. `stop` aborts the
    /// branch when another branch has already won.
    fn dfs(&self, set: &StrandSet, budget: usize, path: &mut Vec<usize>, stop: &dyn Fn() -> bool) -> Dfs {
        let nodes = self.nodes.fetch_add(1, Ordering::Relaxed);
        if nodes.is_multiple_of(256) && self.out_of_time() {
            return Dfs::Aborted;
        }
        let n = self.inc.strand_count();
        if set.len() == n {
            return Dfs::Found(path.clone());
        }
        if budget == 0 || self.failed.has_failed(set, budget) {
            return Dfs::Failed;
        }
        let mut work = Vec::new();
        for x in 0..n {
            if set.contains(x) {
                continue;
            }
            if stop() || self.timed_out.load(Ordering::Relaxed) {
                return Dfs::Aborted;
            }
            let mut next = set.clone();
            self.inc.extend(&mut next, x, &mut work);
            path.push(x);
            let r = self.dfs(&next, budget - 1, path, stop);
            path.pop();
            match r {
                Dfs::Failed => {}
                other => return other,
            }
        }
        self.failed.record(set, budget);
        Dfs::Failed
    }

    /// All k-seed sequences, one branch per first seed.
    fn level(&self, k: usize, parallel: bool) -> Dfs {
        let n = self.inc.strand_count();
        let branch = |first: usize, stop: &dyn Fn() -> bool| -> Dfs {
            let root = self.inc.closure_of([first]);
            let mut path = vec![first];
            self.dfs(&root, k - 1, &mut path, stop)
        };
        let results: Vec<Dfs> = if parallel && cfg!(feature = "parallel") && n > 1 {
            let best = AtomicUsize::new(usize::MAX);
            crate::par::map_indices(n, |first| {
                let stop = || best.load(Ordering::Relaxed) < first;
                let r = branch(first, &stop);
                if matches!(r, Dfs::Found(_)) {
                    best.fetch_min(first, Ordering::Relaxed);
                }
                r
            })
        } else {
            let mut out = Vec::with_capacity(n);
            for first in 0..n {
                let r = branch(first, &|| false);
                let done = !matches!(r, Dfs::Failed);
                out.push(r);
                if done {
                    break;
                }
            }
            out
        };
        // The least first seed that succeeded wins; an abort before it
        // (timeout) means the level is unsettled.
        for r in results {
            match r {
                Dfs::Failed => continue,
                other => return other,
            }
        }
        Dfs::Failed
    }
}

/// Computes the Wirtinger number by ascending-k seed search.
pub fn wirtinger_number(d: &Diagram, opts: &SearchOptions) -> SearchOutcome {
    let started = Instant::now();
    let inc = Incidence::new(d);
    let n = inc.strand_count();
    let searcher = Searcher {
        inc: &inc,
        deadline: opts.time_limit.map(|t| started + t),
        timed_out: AtomicBool::new(false),
        nodes: AtomicU64::new(0),
        failed: FailureTable::default(),
    };
    let max_k = opts.max_k.unwrap_or(n).min(n);
    let finish = |status, k, certificate| SearchOutcome {
        status,
        k,
        certificate,
        elapsed: started.elapsed(),
        nodes_explored: searcher.nodes.load(Ordering::Relaxed),
    };
    for k in 1..=max_k {
        match searcher.level(k, opts.parallel) {
            Dfs::Found(path) => {
                let mut seeds: Vec<StrandId> = path.into_iter().map(StrandId::from_index).collect();
                seeds.sort();
                let closure = propagate(d, &seeds).expect("seeds come from the diagram");
                debug_assert!(closure.is_complete());
                let cert = Certificate { k, seeds, trace: closure.trace };
                return finish(SearchStatus::Exact, k, Some(cert));
            }
            Dfs::Failed => {}
            Dfs::Aborted => return finish(SearchStatus::LowerBoundOnly, k, None),
        }
    }
    finish(SearchStatus::LowerBoundOnly, max_k + 1, None)
}

/// Closed sets known to fail, with the largest budget they failed under.
#[derive(Default)]
struct FailureTable {
    #[cfg(feature = "parallel")]
    inner: dashmap::DashMap<StrandSet, usize>,
    #[cfg(not(feature = "parallel"))]
    inner: std::sync::Mutex<std::collections::HashMap<StrandSet, usize>>,
}

impl FailureTable {
    #[cfg(feature = "parallel")]
    fn has_failed(&self, set: &StrandSet, budget: usize) -> bool {
        self.inner.get(set).is_some_and(|b| *b >= budget)
    }

    #[cfg(feature = "parallel")]
    fn record(&self, set: &StrandSet, budget: usize) {
        let mut e = self.inner.entry(set.clone()).or_insert(budget);
        if *e < budget {
            *e = budget;
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn has_failed(&self, set: &StrandSet, budget: usize) -> bool {
        self.inner.lock().unwrap().get(set).is_some_and(|b| *b >= budget)
    }

    #[cfg(not(feature = "parallel"))]
    fn record(&self, set: &StrandSet, budget: usize) {
        let mut map = self.inner.lock().unwrap();
        let e = map.entry(set.clone()).or_insert(budget);
        if *e < budget {
            *e = budget;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_certificate;
    use crate::diagram::parse_gauss;

    fn omega(code: &str) -> SearchOutcome {
        wirtinger_number(&parse_gauss(code).unwrap(), &SearchOptions::default())
    }

    #[test]
    fn trefoil_is_two() {
        let out = omega("O1U2O3U1O2U3");
        assert_eq!(out.status, SearchStatus::Exact);
        assert_eq!(out.k, 2);
        let cert = out.certificate.unwrap();
        assert_eq!(cert.seeds, vec![StrandId(1), StrandId(2)]);
    }

    #[test]
    fn degenerate_codes() {
        let out = omega("");
        assert_eq!((out.status, out.k), (SearchStatus::Exact, 1));
        assert_eq!(out.certificate.unwrap().seeds, vec![StrandId(1)]);
        assert_eq!(omega("O1U1").k, 1);
        // a kink's over-strand is one of its own under-strands, so one seed
        // runs through both kinks
        assert_eq!(omega("O1U1O2U2").k, 1);
    }

    #[test]
    fn max_k_gives_lower_bound() {
        let d = parse_gauss("U1O2U3O4U5O1U6O3U4O7U8O5U2O6U7O8").unwrap();
        let opts = SearchOptions { max_k: Some(2), ..SearchOptions::default() };
        let out = wirtinger_number(&d, &opts);
        assert_eq!(out.status, SearchStatus::LowerBoundOnly);
        assert_eq!(out.k, 3);
        assert!(out.certificate.is_none());
    }

    #[test]
    fn zero_time_limit_gives_lower_bound() {
        let d = parse_gauss("U1O2U3O4U5O1U6O3U4O7U8O5U2O6U7O8").unwrap();
        let opts = SearchOptions { time_limit: Some(Duration::ZERO), ..SearchOptions::default() };
        let out = wirtinger_number(&d, &opts);
        assert_eq!(out.status, SearchStatus::LowerBoundOnly);
        assert_eq!(out.k, 1);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let d = parse_gauss("U1O2U3O4U5O1U6O3U4O7U8O5U2O6U7O8").unwrap();
        let a = wirtinger_number(&d, &SearchOptions::default());
        let b = wirtinger_number(&d, &SearchOptions::sequential());
        assert_eq!(a.k, 3);
        assert_eq!(a.k, b.k);
        assert_eq!(a.certificate, b.certificate);
        assert_eq!(verify_certificate(&d, a.certificate.as_ref().unwrap()), Ok(()));
    }
}
