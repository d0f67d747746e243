//! Text representation, suffix structures, attractor verification and the
//! exhaustive smallest-attractor oracle.

mod index;
mod text;
mod verify;

pub use index::{SuffixIndex, SuffixTreeEdge};
pub use text::{AttractorSet, Provenance, Text};
#[cfg(test)]
pub(crate) use verify::next_combination;
pub use verify::{
    find_occurrence_crossing, is_attractor, smallest_attractor_bruteforce, verify_attractor,
    OccurrenceFinder, Verification, Witness, BRUTE_FORCE_MAX,
};

/// Number of distinct non-empty substrings.
pub fn count_distinct_substrings(idx: &SuffixIndex) -> u64 {
    idx.count_distinct_substrings()
}

/// Length of the longest repeated substring (0 when every substring is unique).
pub fn longest_repeated_len(idx: &SuffixIndex) -> usize {
    idx.longest_repeated_len()
}
