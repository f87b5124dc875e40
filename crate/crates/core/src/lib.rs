//! PBPO+ rewriting of finite lattice-labeled multigraphs: the categorical
//! kernel (pullbacks, pushouts, factorizations, partial map classifiers,
//! materialization), strong-match semantics and step execution with square
//! certificates, determinism certificates, and reference engines plus
//! translations for DPO, AGREE, and PBPO.

pub mod classifier;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod interop;
pub mod json;
pub mod lattice;
pub mod limits;
pub mod rewrite;

pub use error::{Error, Result};
