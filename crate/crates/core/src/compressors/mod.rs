//! Classic compressors and the attractors they induce.

mod bwt;
mod grammar;
mod lz77;
mod macro_scheme;

pub use bwt::{attractor_from_bwt_runs, bwt_runs, BwtRuns};
pub use grammar::{attractor_from_grammar, GrammarSize, RlGrammar, Rule, Symbol, MAX_EXPANSION};
pub use lz77::{attractor_from_lz77, lz77_parse, Lz77Parse, Lz77Phrase};
pub use macro_scheme::{attractor_from_macro, Decoded, Directive, MacroScheme};

use crate::error::{Error, Result};
use crate::textcore::{AttractorSet, Provenance, SuffixIndex};

/// Bytes travel through JSON as one-character strings, read as Latin-1.
pub(crate) fn symbol_to_json(c: u8) -> String {
    char::from(c).to_string()
}

pub(crate) fn symbol_from_json(s: &str) -> Result<u8> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if (c as u32) < 256 => Ok(c as u8),
        _ => Err(Error::Format(format!(
            "expected a single byte-valued character, got {s:?}"
        ))),
    }
}

/// For every suffix-tree edge, the end of the leftmost occurrence of the
/// string spelled up to the edge's first character.
///
/// Any substring ends inside some edge, and its leftmost occurrence then
/// contains that edge's marked position, so the set has at most `e` elements.
pub fn attractor_from_suffix_tree(idx: &SuffixIndex) -> AttractorSet {
    let positions = idx.edges().iter().map(|e| e.first_occ + e.st_len());
    AttractorSet::new(idx.n(), positions, Provenance::SuffixTree)
        .expect("edge positions lie inside the text")
}
