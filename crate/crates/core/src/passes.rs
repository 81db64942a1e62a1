//! Over/under pass structure of a diagram.
//!
//! Reading the code cyclically, the maximal runs of consecutive
//! over-passages (overpasses) and under-passages (underpasses) alternate.
//! Any alternating pass sequence has to cut the circle at every place an
//! over-passage meets an under-passage, and each piece it keeps holds
//! passages of one kind only, so no alternating sequence has fewer
//! overpasses than there are maximal over-runs. The overpass bridge number
//! of a diagram is therefore the number of maximal over-runs.

use serde::Serialize;

use crate::diagram::{CrossingId, Diagram, DiagramError, Passage};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassRun {
    pub kind: Passage,
    /// Entry index where the run starts.
    pub start: usize,
    pub crossings: Vec<CrossingId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassDecomposition {
    /// Cyclic list of maximal runs. The first run starts at the first run
    /// boundary at or after entry 0.
    pub runs: Vec<PassRun>,
    pub overpass_count: usize,
}

impl PassDecomposition {
    /// Index pairs of cyclically consecutive runs. With exactly two runs
    /// there is a single pair.
    pub fn consecutive_pairs(&self) -> Vec<(usize, usize)> {
        let r = self.runs.len();
        match r {
            0 | 1 => Vec::new(),
            2 => vec![(0, 1)],
            _ => (0..r).map(|i| (i, (i + 1) % r)).collect(),
        }
    }
}

pub fn pass_decomposition(d: &Diagram) -> Result<PassDecomposition, DiagramError> {
    let entries = d.entries();
    let m = entries.len();
    if m == 0 {
        return Err(DiagramError::EmptyDiagram);
    }
    let kind = |i: usize| entries[i % m].passage;
    let first = (0..m)
        .find(|&i| kind(i) != kind(i + m - 1))
        .expect("a nonempty code has both passage kinds");
    let mut runs: Vec<PassRun> = Vec::new();
    for t in 0..m {
        let i = (first + t) % m;
        let e = entries[i];
        match runs.last_mut() {
            Some(run) if run.kind == e.passage => run.crossings.push(e.crossing),
            _ => runs.push(PassRun { kind: e.passage, start: i, crossings: vec![e.crossing] }),
        }
    }
    let overpass_count = runs.iter().filter(|r| r.kind == Passage::Over).count();
    Ok(PassDecomposition { runs, overpass_count })
}

/// Overpass bridge number; 1 for the 0-crossing diagram.
pub fn overpass_number(d: &Diagram) -> usize {
    match pass_decomposition(d) {
        Ok(p) => p.overpass_count,
        Err(_) => 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SharedCrossing {
    /// Index of the first run of the consecutive pair; the pair is
    /// `(run_index, run_index + 1)` cyclically.
    pub run_index: usize,
    pub crossing: CrossingId,
}

/// Crossings shared by cyclically consecutive runs, in run order and then
/// in order of appearance in the first run of each pair.
pub fn consecutive_shared_crossings(d: &Diagram) -> Result<Vec<SharedCrossing>, DiagramError> {
    let p = pass_decomposition(d)?;
    Ok(shared_in(&p))
}

fn shared_in(p: &PassDecomposition) -> Vec<SharedCrossing> {
    let mut out = Vec::new();
    for (i, j) in p.consecutive_pairs() {
        for &c in &p.runs[i].crossings {
            if p.runs[j].crossings.contains(&c) {
                out.push(SharedCrossing { run_index: i, crossing: c });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    /// Every consecutive pair of passes shares a crossing (necessary for the
    /// diagram to minimize overpass bridge number).
    pub overpass_minimal_necessary_condition: bool,
    /// No consecutive pair of passes shares a crossing (necessary for the
    /// diagram to minimize crossing number).
    pub crossing_minimal_necessary_condition: bool,
}

pub fn minimality_incompatibility_report(d: &Diagram) -> Result<MinimalityReport, DiagramError> {
    let p = pass_decomposition(d)?;
    let pairs = p.consecutive_pairs();
    let shared = shared_in(&p);
    let pair_shares = |pair: (usize, usize)| shared.iter().any(|s| s.run_index == pair.0);
    Ok(MinimalityReport {
        overpass_minimal_necessary_condition: pairs.iter().all(|&pr| pair_shares(pr)),
        crossing_minimal_necessary_condition: shared.is_empty(),
    })
}
