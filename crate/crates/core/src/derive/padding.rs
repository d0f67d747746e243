use crate::error::{Error, Result};
use crate::textcore::{verify_attractor, AttractorSet, Provenance, SuffixIndex, Text};

/// A verified attractor together with a superset whose gaps are bounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedAttractor {
    pub base: AttractorSet,
    pub padded: AttractorSet,
    /// Largest distance between consecutive padded positions, with virtual
    /// fences at 0 and `n + 1`.
    pub max_gap: usize,
}

/// Largest gap between consecutive positions, fences at 0 and `n + 1` included.
pub fn max_gap(g: &AttractorSet) -> usize {
    let mut prev = 0;
    let mut best = 0;
    for &p in g.positions().iter().chain(std::iter::once(&(g.n() + 1))) {
        best = best.max(p - prev);
        prev = p;
    }
    best
}

/// Adds `γ` equally spaced positions to a verified attractor.
///
/// The extras sit at `⌈k(n+1)/(γ+1)⌉` for `k = 1..γ`, so every gap of the
/// result is at most `⌈(n+1)/(γ+1)⌉ ≤ ⌈n/γ⌉`. Supersets of attractors are
/// attractors, so the result verifies as well.
pub fn pad_attractor(t: &Text, idx: &SuffixIndex, g: &AttractorSet) -> Result<PaddedAttractor> {
    let v = verify_attractor(t, idx, g)?;
    if !v.valid {
        let w = v.witness.expect("failed verification carries a witness");
        return Err(Error::InvalidAttractor(w.to_string()));
    }
    let n = t.len();
    let gamma = g.len();
    let extras = (1..=gamma).map(|k| (k * (n + 1)).div_ceil(gamma + 1));
    let padded = AttractorSet::new(
        n,
        g.positions().iter().copied().chain(extras),
        Provenance::Padded,
    )?;
    let max_gap = max_gap(&padded);
    Ok(PaddedAttractor {
        base: g.clone(),
        padded,
        max_gap,
    })
}
