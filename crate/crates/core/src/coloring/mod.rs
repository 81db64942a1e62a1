//! Partial colorings of strands and the coloring move.
//!
//! A move colors one new strand `t` across a crossing `c` when the other
//! under-strand `s` at `c` and the over-strand at `c` are both colored; `t`
//! receives the color of `s`. Applicability only ever depends on which
//! strands are colored, and that set only grows, so the set reached by
//! applying moves until none applies does not depend on the order they were
//! applied in.

mod certificate;
mod incidence;
mod oracle;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{CrossingId, Diagram, StrandId};

pub use certificate::{verify_certificate, Certificate, CertificateError};
pub(crate) use incidence::Incidence;
pub use oracle::{wirtinger_oracle, wirtinger_oracle_with_bound, DEFAULT_ORACLE_BOUND};
pub use search::{wirtinger_number, SearchOptions, SearchOutcome, SearchStatus};

pub type Color = u32;

/// A subset of the strands together with a color in `1..=k` for each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialColoring {
    k: Color,
    colors: Vec<Option<Color>>,
}

impl PartialColoring {
    /// Nothing colored yet.
    pub fn empty(d: &Diagram, k: Color) -> Self {
        PartialColoring { k, colors: vec![None; d.strand_count()] }
    }

    /// Seeds get colors `1, 2, …` in the order given.
    pub fn seeded(d: &Diagram, seeds: &[StrandId]) -> Result<Self, ColoringError> {
        let mut c = PartialColoring::empty(d, seeds.len() as Color);
        for (i, &s) in seeds.iter().enumerate() {
            if !d.contains_strand(s) {
                return Err(ColoringError::UnknownStrand(s));
            }
            if c.colors[s.index()].is_some() {
                return Err(ColoringError::DuplicateSeed(s));
            }
            c.colors[s.index()] = Some(i as Color + 1);
        }
        Ok(c)
    }

    pub fn k(&self) -> Color {
        self.k
    }

    pub fn color(&self, s: StrandId) -> Option<Color> {
        let i = (s.0 as usize).checked_sub(1)?;
        self.colors.get(i).copied().flatten()
    }

    pub fn is_colored(&self, s: StrandId) -> bool {
        self.color(s).is_some()
    }

    pub fn colored(&self) -> Vec<StrandId> {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .map(|(i, _)| StrandId::from_index(i))
            .collect()
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }
}

/// One coloring move: `target` copies the color of `source` across
/// `crossing`, whose over-strand is `over`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MoveRecord {
    pub crossing: CrossingId,
    pub source: StrandId,
    pub target: StrandId,
    pub over: StrandId,
    pub color: Color,
}

impl MoveRecord {
    fn order_key(&self) -> (StrandId, CrossingId, StrandId) {
        (self.target, self.crossing, self.source)
    }
}

/// Why a move is not applicable, keyed by the move condition it breaks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("condition 1: strand {0} is not a strand of the diagram")]
    UnknownTarget(StrandId),
    #[error("condition 1: strand {0} is already colored")]
    TargetAlreadyColored(StrandId),
    #[error("condition 3: crossing {0} does not exist")]
    UnknownCrossing(CrossingId),
    #[error("condition 3: strand {target} is not an under-strand of crossing {crossing}")]
    NotAdjacent { crossing: CrossingId, target: StrandId },
    #[error("condition 3: partner strand {0} is not colored")]
    SourceUncolored(StrandId),
    #[error("condition 4: over-strand {0} is not colored")]
    OverUncolored(StrandId),
    #[error("condition 5: assigned color {found} differs from source color {expected}")]
    WrongColor { expected: Color, found: Color },
}

impl MoveError {
    /// The violated move condition, 1 through 5.
    pub fn condition(&self) -> u8 {
        match self {
            MoveError::UnknownTarget(_) | MoveError::TargetAlreadyColored(_) => 1,
            MoveError::UnknownCrossing(_)
            | MoveError::NotAdjacent { .. }
            | MoveError::SourceUncolored(_) => 3,
            MoveError::OverUncolored(_) => 4,
            MoveError::WrongColor { .. } => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("unknown strand {0}")]
    UnknownStrand(StrandId),
    #[error("strand {0} listed twice as a seed")]
    DuplicateSeed(StrandId),
    #[error("seed set is empty")]
    NoSeeds,
    #[error("oracle limited to {bound} crossings, diagram has {n}")]
    OracleBoundExceeded { n: usize, bound: usize },
}

/// Applies a single coloring move, returning the extended coloring.
pub fn apply_move(
    d: &Diagram,
    c: &PartialColoring,
    crossing: CrossingId,
    target: StrandId,
) -> Result<PartialColoring, MoveError> {
    let record = check_move(d, c, crossing, target)?;
    let mut next = c.clone();
    next.colors[target.index()] = Some(record.color);
    Ok(next)
}

/// Validates a move without applying it.
pub fn check_move(
    d: &Diagram,
    c: &PartialColoring,
    crossing: CrossingId,
    target: StrandId,
) -> Result<MoveRecord, MoveError> {
    if !d.contains_strand(target) {
        return Err(MoveError::UnknownTarget(target));
    }
    let x = d.crossing(crossing).ok_or(MoveError::UnknownCrossing(crossing))?;
    let source = x
        .partner_of(target)
        .ok_or(MoveError::NotAdjacent { crossing, target })?;
    if !c.is_colored(x.over_strand) {
        return Err(MoveError::OverUncolored(x.over_strand));
    }
    if c.is_colored(target) {
        return Err(MoveError::TargetAlreadyColored(target));
    }
    let color = c.color(source).ok_or(MoveError::SourceUncolored(source))?;
    Ok(MoveRecord { crossing, source, target, over: x.over_strand, color })
}

/// Every move applicable to `c`, sorted by (target, crossing, source).
pub fn applicable_moves(d: &Diagram, c: &PartialColoring) -> Vec<MoveRecord> {
    let mut out = Vec::new();
    for x in d.crossings() {
        let Some(_) = c.color(x.over_strand) else { continue };
        let (a, b) = x.under_pair;
        for (source, target) in [(a, b), (b, a)] {
            if let (Some(color), None) = (c.color(source), c.color(target)) {
                out.push(MoveRecord { crossing: x.id, source, target, over: x.over_strand, color });
            }
        }
    }
    out.sort_by_key(MoveRecord::order_key);
    out.dedup();
    out
}

/// Result of running moves until none applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub coloring: PartialColoring,
    pub trace: Vec<MoveRecord>,
}

impl Closure {
    pub fn colored(&self) -> Vec<StrandId> {
        self.coloring.colored()
    }

    pub fn is_complete(&self) -> bool {
        self.coloring.is_complete()
    }
}

fn sorted_seeds(d: &Diagram, seeds: &[StrandId]) -> Result<Vec<StrandId>, ColoringError> {
    if seeds.is_empty() {
        return Err(ColoringError::NoSeeds);
    }
    if let Some(&s) = seeds.iter().find(|s| !d.contains_strand(**s)) {
        return Err(ColoringError::UnknownStrand(s));
    }
    let mut sorted = seeds.to_vec();
    sorted.sort();
    sorted.dedup();
    Ok(sorted)
}

/// Colors `seeds` with `1..=|seeds|` in ascending strand order and applies
/// moves until none is applicable, always taking the move with the least
/// (target, crossing, source).
pub fn propagate(d: &Diagram, seeds: &[StrandId]) -> Result<Closure, ColoringError> {
    propagate_by(d, seeds, |_| 0)
}

/// As [`propagate`], with `choose` picking which of the currently applicable
/// moves (given in sorted order, never empty) to apply next.
pub fn propagate_by<F>(d: &Diagram, seeds: &[StrandId], mut choose: F) -> Result<Closure, ColoringError>
where
    F: FnMut(&[MoveRecord]) -> usize,
{
    let seeds = sorted_seeds(d, seeds)?;
    let mut coloring = PartialColoring::seeded(d, &seeds)?;
    let mut trace = Vec::new();
    loop {
        let moves = applicable_moves(d, &coloring);
        if moves.is_empty() {
            break;
        }
        let m = moves[choose(&moves).min(moves.len() - 1)];
        coloring.colors[m.target.index()] = Some(m.color);
        trace.push(m);
    }
    Ok(Closure { coloring, trace })
}

/// Whether the closure of `seeds` is every strand.
pub fn is_colorable_from(d: &Diagram, seeds: &[StrandId]) -> Result<bool, ColoringError> {
    let seeds = sorted_seeds(d, seeds)?;
    let inc = Incidence::new(d);
    let set = inc.closure_of(seeds.iter().map(|s| s.index()));
    Ok(set.len() == inc.strand_count())
}
