use super::ColoringError;
use crate::diagram::Diagram;

pub const DEFAULT_ORACLE_BOUND: usize = 10;

/// Exhaustive Wirtinger number: every seed subset by increasing size, each
/// closed by plain fixpoint iteration over the crossing table. Shares no code
/// with the pruned search.
pub fn wirtinger_oracle(d: &Diagram) -> Result<usize, ColoringError> {
    wirtinger_oracle_with_bound(d, DEFAULT_ORACLE_BOUND)
}

pub fn wirtinger_oracle_with_bound(d: &Diagram, bound: usize) -> Result<usize, ColoringError> {
    if d.n() > bound {
        return Err(ColoringError::OracleBoundExceeded { n: d.n(), bound });
    }
    let n = d.strand_count();
    let table: Vec<(usize, usize, usize)> = d
        .crossings()
        .iter()
        .map(|x| (x.over_strand.index(), x.under_pair.0.index(), x.under_pair.1.index()))
        .collect();
    for k in 1..=n {
        let mut pick: Vec<usize> = (0..k).collect();
        loop {
            let mut colored = vec![false; n];
            for &s in &pick {
                colored[s] = true;
            }
            let mut changed = true;
            while changed {
                changed = false;
                for &(o, a, b) in &table {
                    if colored[o] && colored[a] != colored[b] {
                        colored[a] = true;
                        colored[b] = true;
                        changed = true;
                    }
                }
            }
            if colored.iter().all(|&c| c) {
                return Ok(k);
            }
            if !next_combination(&mut pick, n) {
                break;
            }
        }
    }
    Ok(n)
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
