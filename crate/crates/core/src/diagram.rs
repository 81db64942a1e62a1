//! Knot diagrams as Gauss codes.
//!
//! A diagram is a cyclic double-occurrence word: every crossing is visited
//! twice along the knot, once passing over and once passing under. Cutting
//! the knot at every under-passage leaves the *strands*; each crossing has
//! one over-strand and two under-strands (the strands that end and begin at
//! its under-passage).
//!
//! The accepted text form is
//!
//! ```text
//! code      := entry*
//! entry     := ("O" | "U") integer sign? separator?
//! sign      := "+" | "-"
//! separator := "," | whitespace
//! ```
//!
//! with `O`/`U` case-insensitive. The 0-crossing diagram serializes to the
//! empty string; line-oriented formats write it as [`EMPTY_CODE_MARKER`].

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Stand-in for the empty code in census lines and CSV cells.
pub const EMPTY_CODE_MARKER: &str = ".";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CrossingId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrandId(pub u32);

impl CrossingId {
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl StrandId {
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(i: usize) -> Self {
        StrandId(i as u32 + 1)
    }
}

impl fmt::Display for CrossingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for StrandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Passage {
    Over,
    Under,
}

impl Passage {
    pub fn letter(self) -> char {
        match self {
            Passage::Over => 'O',
            Passage::Under => 'U',
        }
    }
}

/// Crossing sign as written in the code. Carried through parsing and
/// serialization only; no invariant reads it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
    Unspecified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussEntry {
    pub crossing: CrossingId,
    pub passage: Passage,
    pub sign: Sign,
}

impl GaussEntry {
    pub fn new(crossing: u32, passage: Passage) -> Self {
        GaussEntry { crossing: CrossingId(crossing), passage, sign: Sign::Unspecified }
    }
}

impl fmt::Display for GaussEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.passage.letter(), self.crossing)?;
        match self.sign {
            Sign::Plus => f.write_str("+"),
            Sign::Minus => f.write_str("-"),
            Sign::Unspecified => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("malformed token {token:?} at byte {offset}")]
    MalformedToken { offset: usize, token: String },
    #[error("crossing {crossing} has two {passage:?} passages")]
    DuplicatePassage { crossing: u32, passage: Passage },
    #[error("crossing {crossing} appears only once")]
    UnpairedCrossing { crossing: u32 },
    #[error("operation needs at least one crossing")]
    EmptyDiagram,
}

/// A maximal arc between two consecutive under-passages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub id: StrandId,
    /// Entry indices strictly between the bounding under-passages, in
    /// cyclic order. Only over-passages can occur here.
    pub span: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub id: CrossingId,
    pub over_strand: StrandId,
    /// (strand ending at the under-passage, strand starting after it).
    pub under_pair: (StrandId, StrandId),
    pub over_position: usize,
    pub under_position: usize,
}

impl Crossing {
    /// The other under-strand, if `strand` is one of the two.
    pub fn partner_of(&self, strand: StrandId) -> Option<StrandId> {
        let (a, b) = self.under_pair;
        if strand == b {
            Some(a)
        } else if strand == a {
            Some(b)
        } else {
            None
        }
    }
}

/// A validated Gauss code with its strand and crossing tables.
///
/// Values are immutable once built; the tables are derived eagerly so that
/// the coloring engine can share one diagram across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    entries: Vec<GaussEntry>,
    name: Option<String>,
    strands: Vec<Strand>,
    crossings: Vec<Crossing>,
}

impl Diagram {
    /// The 0-crossing diagram of the round unknot.
    pub fn unknot() -> Self {
        Diagram::from_entries(Vec::new()).expect("empty code is valid")
    }

    /// Validates `entries`, densely renumbering crossing ids by first
    /// occurrence if they do not already form `1..=n`.
    pub fn from_entries(mut entries: Vec<GaussEntry>) -> Result<Self, DiagramError> {
        let mut seen: HashMap<u32, (bool, bool)> = HashMap::new();
        let mut order: Vec<u32> = Vec::new();
        for e in &entries {
            let slot = seen.entry(e.crossing.0).or_insert_with(|| {
                order.push(e.crossing.0);
                (false, false)
            });
            let flag = match e.passage {
                Passage::Over => &mut slot.0,
                Passage::Under => &mut slot.1,
            };
            if *flag {
                return Err(DiagramError::DuplicatePassage { crossing: e.crossing.0, passage: e.passage });
            }
            *flag = true;
        }
        if let Some(&id) = order.iter().find(|id| {
            let (o, u) = seen[id];
            !(o && u)
        }) {
            return Err(DiagramError::UnpairedCrossing { crossing: id });
        }
        let n = order.len();
        let dense = order.iter().all(|&id| id >= 1 && id as usize <= n);
        if !dense {
            let relabel: HashMap<u32, u32> =
                order.iter().enumerate().map(|(i, &id)| (id, i as u32 + 1)).collect();
            for e in &mut entries {
                e.crossing = CrossingId(relabel[&e.crossing.0]);
            }
        }
        let (strands, crossings) = derive_tables(&entries);
        Ok(Diagram { entries, name: None, strands, crossings })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn without_name(mut self) -> Self {
        self.name = None;
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn entries(&self) -> &[GaussEntry] {
        &self.entries
    }

    /// Crossing count.
    pub fn n(&self) -> usize {
        self.entries.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }

    pub fn strand_count(&self) -> usize {
        self.strands.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, id: CrossingId) -> Option<&Crossing> {
        if id.0 == 0 {
            return None;
        }
        self.crossings.get(id.index())
    }

    pub fn contains_strand(&self, s: StrandId) -> bool {
        s.0 >= 1 && (s.0 as usize) <= self.strands.len()
    }

    /// Crossing table; fails on the 0-crossing diagram.
    pub fn crossing_table(&self) -> Result<&[Crossing], DiagramError> {
        if self.is_empty() {
            Err(DiagramError::EmptyDiagram)
        } else {
            Ok(&self.crossings)
        }
    }

    /// Code text without separators, e.g. `O1+U2+O3+U1+O2+U3+`.
    pub fn serialize(&self) -> String {
        self.entries.iter().map(|e| e.to_string()).collect()
    }

    /// Like [`serialize`](Self::serialize) but writes [`EMPTY_CODE_MARKER`]
    /// for the 0-crossing diagram.
    pub fn to_code_cell(&self) -> String {
        if self.is_empty() {
            EMPTY_CODE_MARKER.to_string()
        } else {
            self.serialize()
        }
    }

    /// Least code over rotations, reversal and first-occurrence relabeling,
    /// with signs erased and the name dropped.
    pub fn canonical_form(&self) -> Diagram {
        let m = self.entries.len();
        if m == 0 {
            return Diagram::unknot();
        }
        let forward: Vec<(u32, Passage)> =
            self.entries.iter().map(|e| (e.crossing.0, e.passage)).collect();
        let backward: Vec<(u32, Passage)> = forward.iter().rev().copied().collect();

        let mut best: Option<Vec<(u32, Passage)>> = None;
        let mut relabel = vec![0u32; self.n() + 1];
        let mut candidate = Vec::with_capacity(m);
        for word in [&forward, &backward] {
            for start in 0..m {
                relabel.iter_mut().for_each(|x| *x = 0);
                let mut next = 1;
                candidate.clear();
                for t in 0..m {
                    let (id, p) = word[(start + t) % m];
                    let slot = &mut relabel[id as usize];
                    if *slot == 0 {
                        *slot = next;
                        next += 1;
                    }
                    candidate.push((*slot, p));
                }
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    best = Some(candidate.clone());
                }
            }
        }
        let entries = best
            .unwrap()
            .into_iter()
            .map(|(id, p)| GaussEntry::new(id, p))
            .collect();
        Diagram::from_entries(entries).expect("relabeling preserves validity")
    }

    /// Strand containing the over-passage at entry `position`.
    pub fn strand_at(&self, position: usize) -> Option<StrandId> {
        if self.entries.get(position)?.passage != Passage::Over {
            return None;
        }
        self.strands
            .iter()
            .find(|s| s.span.contains(&position))
            .map(|s| s.id)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for Diagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_gauss(s)
    }
}

/// Parses a Gauss code. The empty string (or the lone marker `.`) yields
/// the 0-crossing diagram.
pub fn parse_gauss(text: &str) -> Result<Diagram, DiagramError> {
    let trimmed = text.trim();
    if trimmed == EMPTY_CODE_MARKER {
        return Ok(Diagram::unknot());
    }
    let bytes = text.as_bytes();
    let mut entries = Vec::new();
    let mut i = 0;
    let malformed = |start: usize, end: usize| DiagramError::MalformedToken {
        offset: start,
        token: String::from_utf8_lossy(&bytes[start..end.min(bytes.len()).max(start + 1).min(bytes.len())])
            .into_owned(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c == b',' || c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let passage = match c {
            b'O' | b'o' => Passage::Over,
            b'U' | b'u' => Passage::Under,
            _ => {
                let end = token_end(bytes, i);
                return Err(malformed(start, end));
            }
        };
        i += 1;
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits_start {
            return Err(malformed(start, token_end(bytes, start)));
        }
        let id: u32 = text[digits_start..i]
            .parse()
            .map_err(|_| malformed(start, i))?;
        if id == 0 {
            return Err(malformed(start, i));
        }
        let sign = match bytes.get(i) {
            Some(b'+') => {
                i += 1;
                Sign::Plus
            }
            Some(b'-') => {
                i += 1;
                Sign::Minus
            }
            _ => Sign::Unspecified,
        };
        match bytes.get(i) {
            None | Some(b'O' | b'o' | b'U' | b'u' | b',') => {}
            Some(b) if b.is_ascii_whitespace() => {}
            Some(_) => return Err(malformed(start, token_end(bytes, start))),
        }
        entries.push(GaussEntry { crossing: CrossingId(id), passage, sign });
    }
    Diagram::from_entries(entries)
}

fn token_end(bytes: &[u8], from: usize) -> usize {
    let mut j = from + 1;
    while j < bytes.len() && !(bytes[j] == b',' || bytes[j].is_ascii_whitespace()) {
        j += 1;
    }
    j
}

pub fn serialize(d: &Diagram) -> String {
    d.serialize()
}

pub fn canonical_form(d: &Diagram) -> Diagram {
    d.canonical_form()
}

/// Strand spans and crossing incidences.
///
/// Strand 1 starts right after the first under-passage in entry order and
/// ids increase along the knot.
fn derive_tables(entries: &[GaussEntry]) -> (Vec<Strand>, Vec<Crossing>) {
    let m = entries.len();
    if m == 0 {
        return (vec![Strand { id: StrandId(1), span: Vec::new() }], Vec::new());
    }
    let n = m / 2;
    let unders: Vec<usize> = (0..m).filter(|&i| entries[i].passage == Passage::Under).collect();
    debug_assert_eq!(unders.len(), n);

    // strand_before[k]: strand ending at under-passage unders[k].
    let mut strands = Vec::with_capacity(n);
    for k in 0..n {
        let from = unders[k];
        let to = if k + 1 < n { unders[k + 1] } else { unders[0] + m };
        let span = (from + 1..to).map(|j| j % m).collect();
        strands.push(Strand { id: StrandId::from_index(k), span });
    }

    let mut over_owner = vec![StrandId(0); m];
    for s in &strands {
        for &j in &s.span {
            over_owner[j] = s.id;
        }
    }
    let mut over_pos = vec![0usize; n];
    let mut under_pos = vec![0usize; n];
    let mut under_rank = vec![0usize; n];
    for (i, e) in entries.iter().enumerate() {
        match e.passage {
            Passage::Over => over_pos[e.crossing.index()] = i,
            Passage::Under => under_pos[e.crossing.index()] = i,
        }
    }
    for (k, &u) in unders.iter().enumerate() {
        under_rank[entries[u].crossing.index()] = k;
    }
    let crossings = (0..n)
        .map(|c| {
            let k = under_rank[c];
            let after = StrandId::from_index(k);
            let before = StrandId::from_index((k + n - 1) % n);
            Crossing {
                id: CrossingId(c as u32 + 1),
                over_strand: over_owner[over_pos[c]],
                under_pair: (before, after),
                over_position: over_pos[c],
                under_position: under_pos[c],
            }
        })
        .collect();
    (strands, crossings)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "O1+U2+O3+U1+O2+U3+";

    #[test]
    fn parses_trefoil() {
        let d = parse_gauss(TREFOIL).unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.entries().len(), 6);
        assert_eq!(d.serialize(), TREFOIL);
    }

    #[test]
    fn parses_kink_and_empty() {
        let d = parse_gauss("O1U1").unwrap();
        assert_eq!(d.n(), 1);
        let e = parse_gauss("").unwrap();
        assert_eq!(e.n(), 0);
        assert_eq!(parse_gauss(".").unwrap(), e);
        assert_eq!(e.serialize(), "");
        assert_eq!(e.to_code_cell(), ".");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_gauss("O1O2U1"), Err(DiagramError::UnpairedCrossing { crossing: 2 }));
        assert_eq!(
            parse_gauss("O1O1U1"),
            Err(DiagramError::DuplicatePassage { crossing: 1, passage: Passage::Over })
        );
        assert!(matches!(parse_gauss("O1X2"), Err(DiagramError::MalformedToken { .. })));
        assert!(matches!(parse_gauss("O U1"), Err(DiagramError::MalformedToken { .. })));
        assert!(matches!(parse_gauss("O0U0"), Err(DiagramError::MalformedToken { .. })));
        assert!(matches!(parse_gauss("O1*U1"), Err(DiagramError::MalformedToken { .. })));
    }

    #[test]
    fn separators_and_case() {
        let a = parse_gauss("o1, u2 ,O3\tU1,o2 u3").unwrap();
        assert_eq!(a.serialize(), "O1U2O3U1O2U3");
    }

    #[test]
    fn sparse_ids_renumbered_by_first_occurrence() {
        let d = parse_gauss("O10U7O3U10O7U3").unwrap();
        assert_eq!(d.serialize(), "O1U2O3U1O2U3");
        // already dense ids are kept
        let d = parse_gauss("O2U1O1U2").unwrap();
        assert_eq!(d.serialize(), "O2U1O1U2");
    }

    #[test]
    fn trefoil_strands() {
        let d = parse_gauss(TREFOIL).unwrap();
        let strands = d.strands();
        assert_eq!(strands.len(), 3);
        for s in strands {
            assert_eq!(s.span.len(), 1);
            assert_eq!(d.entries()[s.span[0]].passage, Passage::Over);
        }
        // first under is U2 at index 1, so strand 1 holds O3, strand 2 O2, strand 3 O1
        let overs: Vec<u32> = strands.iter().map(|s| d.entries()[s.span[0]].crossing.0).collect();
        assert_eq!(overs, vec![3, 2, 1]);
    }

    #[test]
    fn trefoil_crossings() {
        let d = parse_gauss(TREFOIL).unwrap();
        let c1 = d.crossing(CrossingId(1)).unwrap();
        // O1 lies on strand 3; U1 (index 3) sits between strand 1 and strand 2
        assert_eq!(c1.over_strand, StrandId(3));
        assert_eq!(c1.under_pair, (StrandId(1), StrandId(2)));
        let c2 = d.crossing(CrossingId(2)).unwrap();
        assert_eq!(c2.over_strand, StrandId(2));
        assert_eq!(c2.under_pair, (StrandId(3), StrandId(1)));
    }

    #[test]
    fn kink_tables() {
        let d = parse_gauss("O1U1").unwrap();
        assert_eq!(d.strands().len(), 1);
        assert_eq!(d.strands()[0].span, vec![0]);
        let c = d.crossing_table().unwrap()[0];
        assert_eq!(c.over_strand, StrandId(1));
        assert_eq!(c.under_pair, (StrandId(1), StrandId(1)));
    }

    #[test]
    fn empty_tables() {
        let d = Diagram::unknot();
        assert_eq!(d.strands().len(), 1);
        assert!(d.strands()[0].span.is_empty());
        assert_eq!(d.crossing_table(), Err(DiagramError::EmptyDiagram));
    }

    #[test]
    fn alternating_codes_have_one_over_per_strand() {
        let d = parse_gauss("O1U2O3U4O5U1O2U5O4U3").unwrap();
        assert!(d.strands().iter().all(|s| s.span.len() == 1));
    }

    #[test]
    fn canonical_form_quotients() {
        let d = parse_gauss(TREFOIL).unwrap();
        let rotated = parse_gauss("O3+U1+O2+U3+O1+U2+").unwrap();
        let reversed = parse_gauss("U3O2U1O3U2O1").unwrap();
        assert_eq!(d.canonical_form(), rotated.canonical_form());
        assert_eq!(d.canonical_form(), reversed.canonical_form());
        let fig8 = parse_gauss("U1O2U3O1U4O3U2O4").unwrap();
        assert_ne!(d.canonical_form(), fig8.canonical_form());
        assert_eq!(d.canonical_form().serialize(), "O1U2O3U1O2U3");
    }

    #[test]
    fn signs_survive_round_trip() {
        let t = "O1-U2+O3U1-O2+U3";
        assert_eq!(parse_gauss(t).unwrap().serialize(), t);
    }
}
