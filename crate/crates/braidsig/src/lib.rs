//! Exact invariants of positive braid closures.
//!
//! The crate computes signatures of positive braid links along two
//! independent routes — the combined Goeritz forms of the two chessboard
//! surfaces and the symmetrized Seifert form of the fiber surface — and
//! mechanically checks the structural signature bounds that tie the
//! signature to the first Betti number.  All linear algebra is over exact
//! rationals; nothing is rounded.

pub mod braid;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod goeritz;
mod poly;
pub mod proofpipe;
pub mod seifert;
pub mod sigcore;

pub use braid::{
    betti, betti_total, classify, parse_braid_file, parse_braid_word, reduce, BraidWord,
    Classification, ClassificationKind, ReductionTrace,
};
pub use diagram::{build_diagram, chessboard, face_census, wide_faces_present, StandardDiagram};
pub use error::{Error, Result};
pub use goeritz::{audit_entry_rules, gl_signature, goeritz_matrix, GoeritzForm};
pub use proofpipe::{check_final, ProofReport, VerifyOptions};
pub use seifert::{
    alexander, oracle_signature_nullity, seifert_matrix, unit_circle_zeros, AlexanderPolynomial,
};
pub use sigcore::{signature, tridiagonal, SignatureResult, SymmetricMatrix, TrisumSpec};
