//! Interpretability logic over ordinary and generalized Veltman semantics.
//!
//! The crate provides a formula language with `□` and `▷`, finite ordinary
//! and generalized frames and models, deciders for frame conditions, a
//! correspondence sweep, a bounded search for separating structures and a
//! checker for Hilbert-style derivations.

pub mod algebra;
pub mod correspond;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod formula;
pub mod genveltman;
pub mod hilbert;
pub mod schema;
pub mod search;
pub mod semantics;
pub mod transversal;
pub mod veltman;
pub mod verdict;
pub mod worldset;

pub use error::{Error, Result};
pub use format::{Document, Kind, Structure};
pub use formula::Formula;
pub use genveltman::{GenFrame, GenModel};
pub use schema::{Schema, SchemaId};
pub use veltman::{Frame, Model};
pub use verdict::Verdict;
pub use worldset::{World, WorldSet};
