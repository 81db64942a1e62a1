use crate::diagram::Diagram;
use crate::strand_set::StrandSet;

/// Compact crossing incidences for set-level closure.
///
/// Used by the seed search, where only the colored set matters: a strand
/// entering the set can enable moves only at crossings it touches, so the
/// worklist only revisits those.
#[derive(Clone, Debug)]
pub(crate) struct Incidence {
    strands: usize,
    /// Per strand: (over, partner) for each crossing where it is an under-strand.
    under_at: Vec<Vec<(u32, u32)>>,
    /// Per strand: the under pair of each crossing it passes over.
    over_at: Vec<Vec<(u32, u32)>>,
}

impl Incidence {
    pub(crate) fn new(d: &Diagram) -> Self {
        let strands = d.strand_count();
        let mut under_at = vec![Vec::new(); strands];
        let mut over_at = vec![Vec::new(); strands];
        for x in d.crossings() {
            let o = x.over_strand.index() as u32;
            let a = x.under_pair.0.index() as u32;
            let b = x.under_pair.1.index() as u32;
            under_at[a as usize].push((o, b));
            if a != b {
                under_at[b as usize].push((o, a));
            }
            over_at[o as usize].push((a, b));
        }
        Incidence { strands, under_at, over_at }
    }

    pub(crate) fn strand_count(&self) -> usize {
        self.strands
    }

    pub(crate) fn empty_set(&self) -> StrandSet {
        StrandSet::with_capacity(self.strands)
    }

    pub(crate) fn closure_of(&self, seeds: impl IntoIterator<Item = usize>) -> StrandSet {
        let mut set = self.empty_set();
        let mut work = Vec::new();
        for s in seeds {
            if set.insert(s) {
                work.push(s);
            }
        }
        self.run(&mut set, &mut work);
        set
    }

    /// Adds `seed` to an already closed set and closes it again.
    pub(crate) fn extend(&self, set: &mut StrandSet, seed: usize, work: &mut Vec<usize>) {
        if set.insert(seed) {
            work.clear();
            work.push(seed);
            self.run(set, work);
        }
    }

    fn run(&self, set: &mut StrandSet, work: &mut Vec<usize>) {
        while let Some(x) = work.pop() {
            for &(o, p) in &self.under_at[x] {
                if set.contains(o as usize) && set.insert(p as usize) {
                    work.push(p as usize);
                }
            }
            for &(a, b) in &self.over_at[x] {
                let (a, b) = (a as usize, b as usize);
                match (set.contains(a), set.contains(b)) {
                    (true, false) => {
                        set.insert(b);
                        work.push(b);
                    }
                    (false, true) => {
                        set.insert(a);
                        work.push(a);
                    }
                    _ => {}
                }
            }
        }
    }
}
