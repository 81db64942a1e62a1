//! Diagrammatic bridge-number invariants of knot diagrams given as Gauss
//! codes.
//!
//! The central invariant is the Wirtinger number: the least number of
//! strands that, once colored with distinct colors, extend to a coloring of
//! every strand by repeated coloring moves. It is an upper bound for the
//! bridge number and equals it for all tabulated knots the bundled table
//! covers. Around it sit pass decompositions (the overpass bridge number),
//! diagrammatic connected sum and decomposition, and a batch engine for
//! tabulating a whole census.
//!
//! ```
//! use bridgekit_core::{parse_gauss, wirtinger_number, SearchOptions};
//!
//! let trefoil = parse_gauss("O1U2O3U1O2U3").unwrap();
//! let out = wirtinger_number(&trefoil, &SearchOptions::default());
//! assert_eq!(out.k, 2);
//! ```

pub mod batch;
pub mod cache;
pub mod coloring;
pub mod diagram;
pub mod par;
pub mod passes;
pub mod strand_set;
pub mod sum;
pub mod table;

pub use coloring::{
    propagate, verify_certificate, wirtinger_number, wirtinger_oracle, Certificate, CertificateError, SearchOptions,
    SearchOutcome, SearchStatus,
};
pub use diagram::{canonical_form, parse_gauss, serialize, CrossingId, Diagram, DiagramError, Passage, StrandId};
pub use passes::{consecutive_shared_crossings, minimality_incompatibility_report, overpass_number, pass_decomposition};
pub use sum::{connected_sum, decompose, is_composite, superadditivity_check, EdgeRef};
