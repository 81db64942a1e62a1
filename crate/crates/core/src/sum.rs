//! Diagrammatic connected sum and decomposition.
//!
//! On Gauss codes, the connected sum cuts each summand open at an edge and
//! splices the two resulting words together. Conversely a diagram is
//! composite exactly when some proper cyclic segment of its code is closed
//! under pairing: every crossing visited inside the segment is visited
//! twice inside it. The two edges bounding such a segment are where a
//! separating circle meets the knot.

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{wirtinger_number, SearchOptions, SearchOutcome};
use crate::diagram::{CrossingId, Diagram, GaussEntry};

/// An edge of a diagram: the gap just before entry `position`, i.e.
/// between entries `position - 1` and `position` (cyclically).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeRef(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpliceError {
    #[error("edge {position} out of range for a code of length {len}")]
    EdgeOutOfRange { position: usize, len: usize },
}

/// A proper cyclic segment of the code closed under pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub start: usize,
    pub len: usize,
}

impl SplitWitness {
    pub fn indices(&self, code_len: usize) -> impl Iterator<Item = usize> {
        let start = self.start;
        (0..self.len).map(move |t| (start + t) % code_len)
    }

    /// Direct check of the pairing condition.
    pub fn is_valid_for(&self, d: &Diagram) -> bool {
        let m = d.entries().len();
        if self.len == 0 || self.len >= m || self.start >= m {
            return false;
        }
        let mut count = vec![0u8; d.n() + 1];
        for i in self.indices(m) {
            count[d.entries()[i].crossing.0 as usize] += 1;
        }
        count.iter().all(|&c| c == 0 || c == 2)
    }
}

fn check_edge(d: &Diagram, e: EdgeRef) -> Result<(), SpliceError> {
    let len = d.entries().len();
    let ok = if len == 0 { e.0 == 0 } else { e.0 < len };
    if ok {
        Ok(())
    } else {
        Err(SpliceError::EdgeOutOfRange { position: e.0, len })
    }
}

fn rotated(entries: &[GaussEntry], start: usize) -> impl Iterator<Item = GaussEntry> + '_ {
    entries[start..].iter().chain(&entries[..start]).copied()
}

/// `D1 # D2`: D1 read from edge `e1` once around, then D2 read from `e2`
/// with its crossing ids shifted past D1's. A 0-crossing summand leaves
/// the other unchanged.
pub fn connected_sum(d1: &Diagram, e1: EdgeRef, d2: &Diagram, e2: EdgeRef) -> Result<Diagram, SpliceError> {
    check_edge(d1, e1)?;
    check_edge(d2, e2)?;
    if d2.is_empty() {
        return Ok(d1.clone());
    }
    if d1.is_empty() {
        return Ok(d2.clone());
    }
    let offset = d1.n() as u32;
    let entries: Vec<GaussEntry> = rotated(d1.entries(), e1.0)
        .chain(rotated(d2.entries(), e2.0).map(|mut e| {
            e.crossing = CrossingId(e.crossing.0 + offset);
            e
        }))
        .collect();
    let sum = Diagram::from_entries(entries).expect("splice of valid codes is valid");
    Ok(match (d1.name(), d2.name()) {
        (Some(a), Some(b)) => sum.with_name(format!("{a}#{b}")),
        _ => sum,
    })
}

/// Shortest self-paired proper segment, least start on ties; `None` when
/// the diagram is prime as a diagram.
pub fn is_composite(d: &Diagram) -> Option<SplitWitness> {
    let entries = d.entries();
    let m = entries.len();
    if d.n() <= 1 {
        return None;
    }
    let mut best: Option<SplitWitness> = None;
    let mut seen = vec![false; d.n() + 1];
    for start in 0..m {
        seen.iter_mut().for_each(|s| *s = false);
        let mut open = 0usize;
        let limit = best.map_or(m - 1, |b| b.len - 1).min(m - 1);
        for len in 1..=limit {
            let id = entries[(start + len - 1) % m].crossing.0 as usize;
            if seen[id] {
                open -= 1;
            } else {
                seen[id] = true;
                open += 1;
            }
            if open == 0 {
                best = Some(SplitWitness { start, len });
                break;
            }
        }
    }
    best
}

/// Splits recursively at witnesses until every piece is prime. Pieces are
/// densely renumbered and ordered by where they start in `d`'s code.
pub fn decompose(d: &Diagram) -> Vec<Diagram> {
    let positions: Vec<usize> = (0..d.entries().len()).collect();
    let mut pieces = Vec::new();
    split_into(d, positions, &mut pieces);
    pieces.sort_by_key(|(pos, _)| *pos);
    pieces.into_iter().map(|(_, piece)| piece).collect()
}

fn split_into(d: &Diagram, positions: Vec<usize>, out: &mut Vec<(usize, Diagram)>) {
    let Some(w) = is_composite(d) else {
        let first = positions.first().copied().unwrap_or(0);
        out.push((first, d.clone().without_name()));
        return;
    };
    let m = d.entries().len();
    let inner: Vec<usize> = w.indices(m).collect();
    let outer: Vec<usize> = (0..m - w.len).map(|t| (w.start + w.len + t) % m).collect();
    for idx in [inner, outer] {
        let entries = idx.iter().map(|&i| d.entries()[i]).collect();
        let piece = renumbered(entries);
        split_into(&piece, idx.iter().map(|&i| positions[i]).collect(), out);
    }
}

fn renumbered(mut entries: Vec<GaussEntry>) -> Diagram {
    let max = entries.iter().map(|e| e.crossing.0).max().unwrap_or(0) as usize;
    let mut relabel = vec![0u32; max + 1];
    let mut next = 1;
    for e in &mut entries {
        let slot = &mut relabel[e.crossing.0 as usize];
        if *slot == 0 {
            *slot = next;
            next += 1;
        }
        e.crossing = CrossingId(*slot);
    }
    Diagram::from_entries(entries).expect("self-paired segment is a valid code")
}

/// Removes kinks (a crossing whose two passages are cyclically adjacent)
/// until none remain.
pub fn reduce_kinks(d: &Diagram) -> Diagram {
    let mut entries: Vec<GaussEntry> = d.entries().to_vec();
    loop {
        let m = entries.len();
        let kink = (0..m).find(|&i| m >= 2 && entries[i].crossing == entries[(i + 1) % m].crossing);
        let Some(i) = kink else { break };
        let j = (i + 1) % m;
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        entries.remove(hi);
        entries.remove(lo);
    }
    let reduced = renumbered(entries);
    match d.name() {
        Some(name) => reduced.with_name(name),
        None => reduced,
    }
}

/// Outcome of comparing ω(D1 # D2) with ω(D1) + ω(D2) − 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Violated,
    /// A time or k limit left the comparison undecided.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuperadditivityReport {
    pub lhs: usize,
    pub lhs_exact: bool,
    pub rhs: usize,
    pub rhs_exact: bool,
    pub verdict: Verdict,
}

impl SuperadditivityReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Checks ω(D1 # D2) ≥ ω(D1) + ω(D2) − 1 at the default edges, running the
/// three searches concurrently when possible.
pub fn superadditivity_check(d1: &Diagram, d2: &Diagram, opts: &SearchOptions) -> SuperadditivityReport {
    let sum = connected_sum(d1, EdgeRef(0), d2, EdgeRef(0)).expect("edge 0 always exists");
    let (whole, (a, b)) = crate::par::join(
        || wirtinger_number(&sum, opts),
        || crate::par::join(|| wirtinger_number(d1, opts), || wirtinger_number(d2, opts)),
    );
    compare(&whole, &a, &b)
}

fn compare(whole: &SearchOutcome, a: &SearchOutcome, b: &SearchOutcome) -> SuperadditivityReport {
    let lhs = whole.k;
    let rhs = a.k + b.k - 1;
    let lhs_exact = whole.is_exact();
    let rhs_exact = a.is_exact() && b.is_exact();
    // A lower bound on the left still settles "holds" once it reaches an
    // exact right-hand side.
    let verdict = match (lhs_exact, rhs_exact) {
        (_, true) if lhs >= rhs => Verdict::Holds,
        (true, true) => Verdict::Violated,
        _ => Verdict::Inconclusive,
    };
    SuperadditivityReport { lhs, lhs_exact, rhs, rhs_exact, verdict }
}

/// Whether some crossing has its two passages cyclically adjacent.
pub fn has_kink(d: &Diagram) -> bool {
    let e = d.entries();
    let m = e.len();
    m >= 2 && (0..m).any(|i| e[i].crossing == e[(i + 1) % m].crossing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_gauss;

    const TREFOIL: &str = "O1U2O3U1O2U3";

    fn d(code: &str) -> Diagram {
        parse_gauss(code).unwrap()
    }

    #[test]
    fn trefoil_sum_is_concatenation() {
        let t = d(TREFOIL);
        let s = connected_sum(&t, EdgeRef(0), &t, EdgeRef(0)).unwrap();
        assert_eq!(s.serialize(), "O1U2O3U1O2U3O4U5O6U4O5U6");
        assert_eq!(s.n(), 6);
        assert_eq!(s.strand_count(), 6);
    }

    #[test]
    fn sum_with_round_unknot_is_identity() {
        let t = d(TREFOIL);
        assert_eq!(connected_sum(&t, EdgeRef(3), &Diagram::unknot(), EdgeRef(0)).unwrap(), t);
        assert_eq!(connected_sum(&Diagram::unknot(), EdgeRef(0), &t, EdgeRef(2)).unwrap(), t);
    }

    #[test]
    fn edge_range() {
        let t = d(TREFOIL);
        assert_eq!(
            connected_sum(&t, EdgeRef(6), &t, EdgeRef(0)),
            Err(SpliceError::EdgeOutOfRange { position: 6, len: 6 })
        );
        assert!(connected_sum(&t, EdgeRef(0), &Diagram::unknot(), EdgeRef(1)).is_err());
    }

    #[test]
    fn witnesses() {
        let tt = d("O1U2O3U1O2U3O4U5O6U4O5U6");
        assert_eq!(is_composite(&tt), Some(SplitWitness { start: 0, len: 6 }));
        assert_eq!(is_composite(&d(TREFOIL)), None);
        let kinked = d("O1U2O3U1O2U3O4U4");
        assert_eq!(is_composite(&kinked), Some(SplitWitness { start: 6, len: 2 }));
        assert_eq!(is_composite(&d("O1U1")), None);
        assert_eq!(is_composite(&Diagram::unknot()), None);
    }

    #[test]
    fn decompose_trefoil_pair() {
        let tt = d("O1U2O3U1O2U3O4U5O6U4O5U6");
        let parts = decompose(&tt);
        assert_eq!(parts.len(), 2);
        for p in &parts {
            assert_eq!(p.canonical_form(), d(TREFOIL).canonical_form());
        }
        assert_eq!(decompose(&d(TREFOIL)), vec![d(TREFOIL)]);
        assert_eq!(decompose(&Diagram::unknot()), vec![Diagram::unknot()]);
    }

    #[test]
    fn decompose_orders_by_start() {
        let parts = decompose(&d("O1U2O3U1O2U3O4U4"));
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].n(), 3);
        assert_eq!(parts[1].serialize(), "O1U1");
    }

    #[test]
    fn kinks_are_reduced() {
        assert_eq!(reduce_kinks(&d("O1U2O3U1O2U3O4U4")).serialize(), TREFOIL);
        assert!(reduce_kinks(&d("O1U1O2U2")).is_empty());
        // U4 at the end pairs with O4 at the start cyclically
        assert_eq!(reduce_kinks(&d("O4U1O2U3O1U2O3U4")).n(), 3);
        assert!(has_kink(&d("O1U1")));
        assert!(!has_kink(&d(TREFOIL)));
    }

    #[test]
    fn superadditivity_on_trefoils() {
        let t = d(TREFOIL);
        let r = superadditivity_check(&t, &t, &SearchOptions::default());
        assert_eq!((r.lhs, r.rhs), (3, 3));
        assert!(r.holds());
        let r = superadditivity_check(&t, &Diagram::unknot(), &SearchOptions::default());
        assert_eq!((r.lhs, r.rhs), (2, 2));
        assert!(r.holds());
    }
}
