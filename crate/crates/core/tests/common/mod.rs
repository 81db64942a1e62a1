#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use bridgekit_core::diagram::{GaussEntry, Passage};
use bridgekit_core::Diagram;

/// Uniform random double-occurrence word on `n` crossings with a random
/// over/under choice per crossing. Not necessarily planar.
pub fn random_diagram<R: Rng>(rng: &mut R, n: usize) -> Diagram {
    let mut word: Vec<u32> = (1..=n as u32).flat_map(|c| [c, c]).collect();
    word.shuffle(rng);
    let over_first: Vec<bool> = (0..=n).map(|_| rng.gen()).collect();
    let mut seen = vec![false; n + 1];
    let entries = word
        .into_iter()
        .map(|c| {
            let first = !seen[c as usize];
            seen[c as usize] = true;
            let over = first == over_first[c as usize];
            GaussEntry::new(c, if over { Passage::Over } else { Passage::Under })
        })
        .collect();
    Diagram::from_entries(entries).expect("double-occurrence word")
}

/// Rotation by `r` and optional reversal of the code, ids kept.
pub fn rotate_reverse(d: &Diagram, r: usize, reverse: bool) -> Diagram {
    let m = d.entries().len();
    let mut e: Vec<GaussEntry> = (0..m).map(|i| d.entries()[(i + r) % m.max(1)]).collect();
    if reverse {
        e.reverse();
    }
    Diagram::from_entries(e).unwrap()
}
