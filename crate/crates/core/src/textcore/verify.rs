use std::fmt;

use super::index::SuffixIndex;
use super::text::{AttractorSet, Provenance, Text};
use crate::error::{Error, Result};
use crate::util::SparseTable;

/// A substring with no occurrence crossing the tested set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// 1-based inclusive interval of the leftmost occurrence.
    pub start: usize,
    pub end: usize,
    pub reason: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{}..{}]: {}", self.start, self.end, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub valid: bool,
    pub witness: Option<Witness>,
}

fn check_positions(n: usize, g: &AttractorSet) -> Result<()> {
    match g.positions().last() {
        Some(&p) if p > n => Err(Error::PositionOutOfRange { pos: p, n }),
        _ => Ok(()),
    }
}

/// `next[s]` = distance from 0-based position `s` to the nearest attractor
/// position at or after it (`usize::MAX` when none).
fn forward_distances(n: usize, g: &AttractorSet) -> Vec<usize> {
    let mut next = vec![usize::MAX; n + 1];
    let mut upcoming = usize::MAX;
    let mut it = g.positions().iter().rev().peekable();
    for s in (0..n).rev() {
        while let Some(&&p) = it.peek() {
            if p > s {
                upcoming = p - 1;
                it.next();
            } else {
                break;
            }
        }
        next[s] = if upcoming == usize::MAX {
            usize::MAX
        } else {
            upcoming - s
        };
    }
    next
}

/// Checks the attractor property: every substring has an occurrence crossing
/// a position of `g`.
///
/// It suffices to test one string per suffix-tree edge, the path label up to
/// and including the edge's first character: every longer string ending inside
/// the same edge has exactly the same occurrences, extended to the right.
pub fn verify_attractor(t: &Text, idx: &SuffixIndex, g: &AttractorSet) -> Result<Verification> {
    let n = t.len();
    check_positions(n, g)?;
    let next = forward_distances(n, g);
    let dist_by_row: Vec<usize> = idx.sa().iter().map(|&s| next[s]).collect();
    let rmq = SparseTable::new(&dist_by_row);
    for e in idx.edges() {
        // an occurrence starting at s covers [s, s + st_len - 1]
        if rmq.min(e.lb, e.rb) >= e.st_len() {
            let start = e.first_occ + 1;
            let end = e.first_occ + e.st_len();
            return Ok(Verification {
                valid: false,
                witness: Some(Witness {
                    start,
                    end,
                    reason: format!(
                        "substring {:?} has no occurrence crossing the set",
                        String::from_utf8_lossy(&t.slice_bytes(start, end))
                    ),
                }),
            });
        }
    }
    Ok(Verification {
        valid: true,
        witness: None,
    })
}

pub fn is_attractor(t: &Text, idx: &SuffixIndex, g: &AttractorSet) -> bool {
    verify_attractor(t, idx, g)
        .map(|v| v.valid)
        .unwrap_or(false)
}

/// Finds occurrences of text substrings that cross a fixed position set.
///
/// Precomputes nearest-position distances once so that repeated queries (as
/// issued by the parse, SLP and A-DAG constructions) cost `O(log n + occ)`.
pub struct OccurrenceFinder<'a> {
    idx: &'a SuffixIndex,
    next: Vec<usize>,
}

impl<'a> OccurrenceFinder<'a> {
    pub fn new(idx: &'a SuffixIndex, g: &AttractorSet) -> Result<Self> {
        check_positions(idx.n(), g)?;
        Ok(OccurrenceFinder {
            idx,
            next: forward_distances(idx.n(), g),
        })
    }

    /// Leftmost occurrence `[i'..j']` of `T[i..j]` containing a position of the
    /// set, 1-based, or `None` when no occurrence crosses it.
    pub fn find(&self, i: usize, j: usize) -> Result<Option<(usize, usize)>> {
        let n = self.idx.n();
        if i == 0 || i > j || j > n {
            return Err(Error::IntervalOutOfRange {
                start: i,
                end: j,
                n,
            });
        }
        let len = j - i + 1;
        let (lb, rb) = self.idx.interval_of(i - 1, len);
        let best = self.idx.sa()[lb..=rb]
            .iter()
            .copied()
            .filter(|&s| self.next[s] < len)
            .min();
        Ok(best.map(|s| (s + 1, s + len)))
    }
}

/// Leftmost occurrence of `T[i..j]` that crosses a position of `g`.
pub fn find_occurrence_crossing(
    idx: &SuffixIndex,
    i: usize,
    j: usize,
    g: &AttractorSet,
) -> Result<Option<(usize, usize)>> {
    OccurrenceFinder::new(idx, g)?.find(i, j)
}

/// Upper bound on `n` for the exhaustive smallest-attractor search.
pub const BRUTE_FORCE_MAX: usize = 64;

/// Exact smallest attractor by enumerating subsets in order of size, then
/// lexicographically; the first verifying subset is returned.
///
/// Each suffix-tree edge contributes the bitmask of positions covered by some
/// occurrence of its `st` string; a subset verifies iff it meets every mask.
pub fn smallest_attractor_bruteforce(
    t: &Text,
    idx: &SuffixIndex,
    limit: usize,
) -> Result<AttractorSet> {
    let n = t.len();
    if n > limit || n > BRUTE_FORCE_MAX {
        return Err(Error::InputTooLarge {
            size: n,
            limit: limit.min(BRUTE_FORCE_MAX),
        });
    }
    let masks = coverage_masks(idx);
    // the lower bound σ holds for every attractor
    for size in t.sigma()..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let set: u64 = combo.iter().fold(0, |m, &p| m | (1u64 << p));
            if masks.iter().all(|&m| m & set != 0) {
                return AttractorSet::new(n, combo.iter().map(|&p| p + 1), Provenance::Brute);
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    Err(Error::Internal(
        "no subset verifies, not even the full set".into(),
    ))
}

fn coverage_masks(idx: &SuffixIndex) -> Vec<u64> {
    let mut masks: Vec<u64> = idx
        .edges()
        .iter()
        .map(|e| {
            let span = if e.st_len() >= 64 {
                u64::MAX
            } else {
                (1u64 << e.st_len()) - 1
            };
            idx.sa()[e.lb..=e.rb]
                .iter()
                .fold(0u64, |m, &s| m | (span << s))
        })
        .collect();
    masks.sort_unstable_by_key(|m| m.count_ones());
    masks.dedup();
    masks
}

/// Advances `combo` to the next k-subset of `[0, n)` in lexicographic order.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
