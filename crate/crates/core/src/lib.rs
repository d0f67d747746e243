//! String attractors as a common currency for dictionary compressors.
//!
//! The crate computes the attractors induced by LZ77, run-length BWT,
//! run-length grammars, macro schemes and suffix trees; turns any attractor
//! back into a bidirectional parse or a straight-line program; builds the
//! A-DAG for packed random access; and approximates smallest string and path
//! attractors through set cover.
//!
//! Positions are 1-based throughout the public API.

pub mod adag;
pub mod bounds;
pub mod compressors;
pub mod derive;
pub mod error;
pub mod textcore;
pub mod treeattr;
mod util;

pub use error::{Error, Result};
pub use textcore::{AttractorSet, Provenance, SuffixIndex, Text};
