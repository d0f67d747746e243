use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-empty text over a dense alphabet `[1..σ]`.
///
/// Input bytes are remapped to ranks on ingestion; the rank order follows the
/// byte order, so suffix sorting over ranks equals suffix sorting over bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    ranks: Vec<u32>,
    /// `alphabet[r - 1]` is the byte with rank `r`.
    alphabet: Vec<u8>,
}

impl Text {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.is_empty() {
            return Err(Error::EmptyText);
        }
        let mut seen = [false; 256];
        for &b in bytes {
            seen[b as usize] = true;
        }
        let alphabet: Vec<u8> = (0..=255u8).filter(|&b| seen[b as usize]).collect();
        let mut rank_of = [0u32; 256];
        for (r, &b) in alphabet.iter().enumerate() {
            rank_of[b as usize] = r as u32 + 1;
        }
        let ranks = bytes.iter().map(|&b| rank_of[b as usize]).collect();
        Ok(Text { ranks, alphabet })
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    /// Symbol ranks in `[1..σ]`, 0-based slice indexing.
    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    /// Byte at 1-based position `pos`.
    pub fn byte_at(&self, pos: usize) -> u8 {
        self.alphabet[self.ranks[pos - 1] as usize - 1]
    }

    pub fn rank_to_byte(&self, rank: u32) -> u8 {
        self.alphabet[rank as usize - 1]
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.ranks
            .iter()
            .map(|&r| self.alphabet[r as usize - 1])
            .collect()
    }

    /// Bytes of the 1-based inclusive interval `[i..j]`.
    pub fn slice_bytes(&self, i: usize, j: usize) -> Vec<u8> {
        self.ranks[i - 1..j]
            .iter()
            .map(|&r| self.alphabet[r as usize - 1])
            .collect()
    }
}

impl fmt::Display for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", String::from_utf8_lossy(&self.to_bytes()))
    }
}

/// Which construction produced an attractor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Lz77,
    BwtRuns,
    Grammar,
    Macro,
    SuffixTree,
    Greedy,
    Brute,
    User,
    Padded,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Lz77 => "lz77",
            Provenance::BwtRuns => "bwt-runs",
            Provenance::Grammar => "grammar",
            Provenance::Macro => "macro",
            Provenance::SuffixTree => "suffix-tree",
            Provenance::Greedy => "greedy",
            Provenance::Brute => "brute",
            Provenance::User => "user",
            Provenance::Padded => "padded",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A set of 1-based text positions, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorSet {
    n: usize,
    positions: Vec<usize>,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct AttractorJson {
    n: usize,
    positions: Vec<usize>,
    provenance: Provenance,
}

impl AttractorSet {
    /// Builds a set for a text of length `n`; positions may come unsorted and
    /// with duplicates.
    pub fn new(
        n: usize,
        positions: impl IntoIterator<Item = usize>,
        provenance: Provenance,
    ) -> Result<Self> {
        let mut positions: Vec<usize> = positions.into_iter().collect();
        positions.sort_unstable();
        positions.dedup();
        if let Some(&bad) = positions.iter().find(|&&p| p == 0 || p > n) {
            return Err(Error::PositionOutOfRange { pos: bad, n });
        }
        Ok(AttractorSet {
            n,
            positions,
            provenance,
        })
    }

    /// All positions `{1..n}`.
    pub fn full(n: usize) -> Self {
        AttractorSet {
            n,
            positions: (1..=n).collect(),
            provenance: Provenance::User,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.positions.binary_search(&pos).is_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&AttractorJson {
            n: self.n,
            positions: self.positions.clone(),
            provenance: self.provenance,
        })
        .expect("attractor serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: AttractorJson = serde_json::from_str(s)?;
        AttractorSet::new(raw.n, raw.positions, raw.provenance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn densifies_alphabet() {
        let t = Text::from_bytes(b"CDABCCDABCCA").unwrap();
        assert_eq!(t.len(), 12);
        assert_eq!(t.sigma(), 4);
        assert_eq!(t.alphabet(), b"ABCD");
        assert_eq!(&t.ranks()[..4], &[3, 4, 1, 2]);
        assert_eq!(t.to_bytes(), b"CDABCCDABCCA");
        assert_eq!(t.byte_at(2), b'D');
        assert_eq!(t.slice_bytes(6, 10), b"CDABC");
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(Text::from_bytes(b""), Err(Error::EmptyText));
    }

    #[test]
    fn attractor_json_roundtrip() {
        let g = AttractorSet::new(12, [12, 4, 7, 11, 4], Provenance::User).unwrap();
        assert_eq!(g.positions(), &[4, 7, 11, 12]);
        let json = g.to_json();
        assert_eq!(
            json,
            r#"{"n":12,"positions":[4,7,11,12],"provenance":"user"}"#
        );
        assert_eq!(AttractorSet::from_json(&json).unwrap(), g);
    }

    #[test]
    fn rejects_out_of_range_positions() {
        assert_eq!(
            AttractorSet::new(3, [0, 1], Provenance::User),
            Err(Error::PositionOutOfRange { pos: 0, n: 3 })
        );
        assert!(AttractorSet::new(3, [4], Provenance::User).is_err());
    }
}
