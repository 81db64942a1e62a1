//! Bundled knot data: minimal diagrams of the prime knots through ten
//! crossings with their bridge indices, and a hard unknot diagram.

use std::sync::OnceLock;

use crate::diagram::{parse_gauss, Diagram};

const KNOT_TABLE: &str = include_str!("../data/knot_table.tsv");
const HARD_UNKNOT: &str = include_str!("../data/hard_unknot_15.txt");

/// The census of the bundled table in `name<TAB>code` form.
pub const CENSUS_UPTO_10: &str = include_str!("../data/census_upto_10.txt");

#[derive(Clone, Debug)]
pub struct TableKnot {
    pub name: String,
    pub crossings: usize,
    pub bridge_index: usize,
    pub diagram: Diagram,
}

/// All bundled knots in table order (0_1, 3_1, 4_1, 5_1, …).
pub fn knot_table() -> &'static [TableKnot] {
    static TABLE: OnceLock<Vec<TableKnot>> = OnceLock::new();
    TABLE.get_or_init(|| {
        KNOT_TABLE
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|line| {
                let f: Vec<&str> = line.split('\t').collect();
                assert_eq!(f.len(), 4, "bad table row {line:?}");
                let code = if f[3] == crate::diagram::EMPTY_CODE_MARKER { "" } else { f[3] };
                TableKnot {
                    name: f[0].to_string(),
                    crossings: f[1].parse().expect("crossing count"),
                    bridge_index: f[2].parse().expect("bridge index"),
                    diagram: parse_gauss(code).expect("bundled code parses").with_name(f[0]),
                }
            })
            .collect()
    })
}

pub fn table_knot(name: &str) -> Option<&'static TableKnot> {
    knot_table().iter().find(|k| k.name == name)
}

/// A 15-crossing unknot diagram that greedy Reidemeister simplification
/// does not reduce. Its Wirtinger number is 3.
pub fn hard_unknot() -> Diagram {
    let line = HARD_UNKNOT
        .lines()
        .find(|l| !l.starts_with('#') && !l.trim().is_empty())
        .expect("fixture has a data line");
    let (name, code) = line.split_once('\t').expect("name<TAB>code");
    parse_gauss(code).expect("fixture parses").with_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_loads() {
        let t = knot_table();
        assert_eq!(t.len(), 250);
        assert_eq!(t[0].name, "0_1");
        assert!(t[0].diagram.is_empty());
        for k in t {
            assert_eq!(k.diagram.n(), k.crossings, "{}", k.name);
        }
        assert_eq!(table_knot("8_17").unwrap().bridge_index, 3);
    }

    #[test]
    fn hard_unknot_loads() {
        let d = hard_unknot();
        assert_eq!(d.n(), 15);
        assert_eq!(d.name(), Some("hard_unknot_15"));
    }
}
