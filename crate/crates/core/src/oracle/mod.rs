//! Brute-force ground truth used to cross-check the constructive algorithms.

pub mod extremal;
pub mod iso;
pub mod lemmas;

pub use extremal::{extremal_number, ExtremalError, ExtremalMode, ExtremalRecord};
pub use iso::{contains_subdivision, contains_subgraph, Containment};
pub use lemmas::{
    check_lightcorollary, check_locallydense, check_manylight, check_turan_step, Freeness, FreenessStatus, Lemma,
    LemmaError, LemmaReport,
};
