use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{check_move, Color, MoveError, MoveRecord, PartialColoring};
use crate::diagram::{Diagram, StrandId};

/// Witness that a diagram is `k`-colorable: seeds colored `1..=k` in listed
/// order, then a move sequence that colors everything else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: usize,
    pub seeds: Vec<StrandId>,
    pub trace: Vec<MoveRecord>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("k = {k} but {seeds} seeds listed")]
    SeedCount { k: usize, seeds: usize },
    #[error("seed {0} is not a strand of the diagram")]
    UnknownSeed(StrandId),
    #[error("seed {0} listed twice")]
    DuplicateSeed(StrandId),
    #[error("step {step}: {source}")]
    Move {
        step: usize,
        #[source]
        source: MoveError,
    },
    #[error("step {step}: recorded {field} is {recorded}, diagram says {actual}")]
    RecordMismatch { step: usize, field: &'static str, recorded: StrandId, actual: StrandId },
    #[error("{uncolored} strands still uncolored after the last move")]
    Incomplete { uncolored: usize },
}

impl CertificateError {
    /// Move step (0-based) where replay failed, if the failure is a move.
    pub fn step(&self) -> Option<usize> {
        match self {
            CertificateError::Move { step, .. } | CertificateError::RecordMismatch { step, .. } => Some(*step),
            _ => None,
        }
    }
}

/// Replays seeds and moves through the move rules.
pub fn verify_certificate(d: &Diagram, cert: &Certificate) -> Result<(), CertificateError> {
    if cert.k != cert.seeds.len() || cert.k == 0 {
        return Err(CertificateError::SeedCount { k: cert.k, seeds: cert.seeds.len() });
    }
    let mut coloring = PartialColoring::empty(d, cert.k as Color);
    for (i, &s) in cert.seeds.iter().enumerate() {
        if !d.contains_strand(s) {
            return Err(CertificateError::UnknownSeed(s));
        }
        if coloring.is_colored(s) {
            return Err(CertificateError::DuplicateSeed(s));
        }
        coloring.colors[s.index()] = Some(i as Color + 1);
    }
    for (step, rec) in cert.trace.iter().enumerate() {
        let actual = check_move(d, &coloring, rec.crossing, rec.target)
            .map_err(|source| CertificateError::Move { step, source })?;
        if actual.source != rec.source {
            return Err(CertificateError::RecordMismatch {
                step,
                field: "source",
                recorded: rec.source,
                actual: actual.source,
            });
        }
        if actual.over != rec.over {
            return Err(CertificateError::RecordMismatch {
                step,
                field: "over",
                recorded: rec.over,
                actual: actual.over,
            });
        }
        if actual.color != rec.color {
            return Err(CertificateError::Move {
                step,
                source: MoveError::WrongColor { expected: actual.color, found: rec.color },
            });
        }
        coloring.colors[rec.target.index()] = Some(rec.color);
    }
    let uncolored = d.strand_count() - coloring.colored_count();
    if uncolored > 0 {
        return Err(CertificateError::Incomplete { uncolored });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{wirtinger_number, SearchOptions};
    use crate::diagram::parse_gauss;

    fn trefoil_cert() -> (Diagram, Certificate) {
        let d = parse_gauss("O1U2O3U1O2U3").unwrap();
        let out = wirtinger_number(&d, &SearchOptions::default());
        (d, out.certificate.unwrap())
    }

    #[test]
    fn emitted_certificate_verifies() {
        let (d, cert) = trefoil_cert();
        assert_eq!(verify_certificate(&d, &cert), Ok(()));
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn deleted_move_fails() {
        let (d, mut cert) = trefoil_cert();
        assert!(!cert.trace.is_empty());
        cert.trace.remove(0);
        assert!(verify_certificate(&d, &cert).is_err());
    }

    #[test]
    fn wrong_color_cites_condition_five() {
        let (d, mut cert) = trefoil_cert();
        cert.trace[0].color = 7;
        let err = verify_certificate(&d, &cert).unwrap_err();
        match err {
            CertificateError::Move { step: 0, source } => assert_eq!(source.condition(), 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_shape() {
        let (_, cert) = trefoil_cert();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(v["k"], 2);
        assert!(v["seeds"].is_array());
        let step = &v["trace"][0];
        for key in ["crossing", "source", "target", "over", "color"] {
            assert!(step[key].is_u64(), "missing {key}");
        }
    }

    #[test]
    fn seed_count_mismatch() {
        let (d, mut cert) = trefoil_cert();
        cert.k = 3;
        assert!(matches!(verify_certificate(&d, &cert), Err(CertificateError::SeedCount { .. })));
    }
}
