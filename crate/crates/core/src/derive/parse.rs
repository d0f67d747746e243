use super::padding::PaddedAttractor;
use crate::compressors::{Directive, MacroScheme};
use crate::error::{Error, Result};
use crate::textcore::{OccurrenceFinder, SuffixIndex, Text};

/// Directive count for one gap between consecutive padded positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapStats {
    /// Left end of the gap, 0 for the fence before the text.
    pub left: usize,
    /// Right end of the gap, `n + 1` for the fence after the text.
    pub right: usize,
    /// Copy phrases inside the gap plus the explicit symbol at `right`.
    pub directives: usize,
}

impl GapStats {
    pub fn gap(&self) -> usize {
        self.right - self.left
    }
}

/// A macro scheme whose destinations partition the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BidirectionalParse {
    scheme: MacroScheme,
    gaps: Vec<GapStats>,
    max_gap: usize,
}

impl BidirectionalParse {
    pub fn scheme(&self) -> &MacroScheme {
        &self.scheme
    }

    pub fn into_scheme(self) -> MacroScheme {
        self.scheme
    }

    pub fn gaps(&self) -> &[GapStats] {
        &self.gaps
    }

    pub fn max_gap(&self) -> usize {
        self.max_gap
    }

    pub fn size(&self) -> usize {
        self.scheme.size()
    }

    /// Copy phrases as `(dst_start, dst_end, src_start)`, in text order.
    pub fn copies(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.scheme.directives().iter().filter_map(|d| match *d {
            Directive::Copy { dst, src } => Some((dst.0, dst.1, src.0)),
            Directive::Assign { .. } => None,
        })
    }

    pub fn height(&self) -> Result<usize> {
        self.scheme
            .decode()?
            .height
            .ok_or_else(|| Error::Internal("parse destinations do not partition the text".into()))
    }
}

/// Phrases of lengths 1, 2, 4, ... from `a` rightward, the last cut at `b`.
fn grow_right(a: usize, b: usize, out: &mut Vec<(usize, usize)>) {
    let (mut s, mut len) = (a, 1);
    while s <= b {
        let e = (s + len - 1).min(b);
        out.push((s, e));
        s = e + 1;
        len *= 2;
    }
}

/// Phrases of lengths 1, 2, 4, ... from `b` leftward, the last cut at `a`.
fn grow_left(a: usize, b: usize, out: &mut Vec<(usize, usize)>) {
    if a > b {
        return;
    }
    let (mut e, mut len) = (b, 1);
    loop {
        let s = if e + 1 >= a + len { e + 1 - len } else { a };
        out.push((s, e));
        if s == a {
            break;
        }
        e = s - 1;
        len *= 2;
    }
}

/// Bidirectional parse built around a padded attractor.
///
/// Padded positions become explicit symbols. Each gap between consecutive
/// positions is split at its midpoint; the left half is covered by phrases of
/// length 1, 2, 4, ... growing away from the left position, the right half
/// symmetrically from the right one, and the innermost phrase of each half is
/// cut at the midpoint. Gaps touching a text end grow from their only real
/// position. A position at distance `d` from its nearest padded position thus
/// lies in a phrase of length at most `2^⌊log2 d⌋`, and every phrase copies
/// from its leftmost occurrence crossing a padded position, so sources only
/// touch strictly shorter phrases.
pub fn parse_from_attractor(
    t: &Text,
    idx: &SuffixIndex,
    pa: &PaddedAttractor,
) -> Result<BidirectionalParse> {
    let n = t.len();
    let finder = OccurrenceFinder::new(idx, &pa.padded)?;
    let positions = pa.padded.positions();
    if positions.is_empty() {
        return Err(Error::InvalidAttractor("empty attractor".into()));
    }
    let mut dirs: Vec<Directive> = Vec::new();
    let mut gaps = Vec::with_capacity(positions.len() + 1);
    let bounds = std::iter::once(0)
        .chain(positions.iter().copied())
        .chain(std::iter::once(n + 1));
    let bounds: Vec<usize> = bounds.collect();
    for w in bounds.windows(2) {
        let (left, right) = (w[0], w[1]);
        let mut phrases = Vec::new();
        if left == 0 {
            grow_left(1, right - 1, &mut phrases);
        } else if right == n + 1 {
            grow_right(left + 1, n, &mut phrases);
        } else {
            let mid = (left + right) / 2;
            grow_right(left + 1, mid, &mut phrases);
            grow_left(mid + 1, right - 1, &mut phrases);
        }
        for &(s, e) in &phrases {
            let src = finder.find(s, e)?.ok_or_else(|| {
                Error::Internal(format!(
                    "no occurrence of T[{s}..{e}] crosses the attractor"
                ))
            })?;
            if src == (s, e) {
                return Err(Error::Internal(format!(
                    "phrase T[{s}..{e}] would copy from itself"
                )));
            }
            dirs.push(Directive::Copy { dst: (s, e), src });
        }
        if right <= n {
            dirs.push(Directive::Assign {
                pos: right,
                ch: t.byte_at(right),
            });
        }
        gaps.push(GapStats {
            left,
            right,
            directives: phrases.len() + usize::from(right <= n),
        });
    }
    dirs.sort_unstable_by_key(|d| match *d {
        Directive::Copy { dst, .. } => dst.0,
        Directive::Assign { pos, .. } => pos,
    });
    Ok(BidirectionalParse {
        scheme: MacroScheme::new(n, dirs),
        gaps,
        max_gap: pa.max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive::pad_attractor;
    use crate::textcore::{AttractorSet, Provenance};
    use crate::util::ceil_log2;

    fn build(s: &[u8], p: &[usize]) -> (Text, BidirectionalParse) {
        let t = Text::from_bytes(s).unwrap();
        let idx = SuffixIndex::build(&t);
        let g = AttractorSet::new(t.len(), p.iter().copied(), Provenance::User).unwrap();
        let pa = pad_attractor(&t, &idx, &g).unwrap();
        let bp = parse_from_attractor(&t, &idx, &pa).unwrap();
        (t, bp)
    }

    fn check_contract(t: &Text, bp: &BidirectionalParse) {
        let decoded = bp.scheme().decode().unwrap();
        assert_eq!(decoded.text, t.to_bytes());
        assert!(bp.scheme().is_partition());
        let h = decoded.height.unwrap();
        assert!(
            h <= ceil_log2(bp.max_gap()) as usize + 2,
            "height {h}, max gap {}",
            bp.max_gap()
        );
        for g in bp.gaps() {
            assert!(g.directives <= 2 * ceil_log2(g.gap()) as usize + 3);
        }
    }

    #[test]
    fn phrase_growth() {
        let mut v = Vec::new();
        grow_right(1, 6, &mut v);
        assert_eq!(v, [(1, 1), (2, 3), (4, 6)]);
        v.clear();
        grow_left(1, 6, &mut v);
        assert_eq!(v, [(6, 6), (4, 5), (1, 3)]);
        v.clear();
        grow_left(3, 2, &mut v);
        assert!(v.is_empty());
    }

    #[test]
    fn unary_text() {
        let (t, bp) = build(b"aaaa", &[1]);
        check_contract(&t, &bp);
        let assigns: Vec<usize> = bp
            .scheme()
            .directives()
            .iter()
            .filter_map(|d| match *d {
                Directive::Assign { pos, .. } => Some(pos),
                _ => None,
            })
            .collect();
        assert_eq!(assigns, [1, 3]);
    }

    #[test]
    fn full_attractor_is_all_explicit() {
        let (t, bp) = build(b"abcab", &[1, 2, 3, 4, 5]);
        check_contract(&t, &bp);
        assert_eq!(bp.size(), 5);
        assert_eq!(bp.height().unwrap(), 1);
    }

    #[test]
    fn example_text() {
        let (t, bp) = build(b"CDABCCDABCCA", &[4, 7, 11, 12]);
        check_contract(&t, &bp);
        let budget: usize = bp
            .gaps()
            .iter()
            .map(|g| 2 * ceil_log2(g.gap()) as usize + 3)
            .sum();
        assert!(bp.size() <= budget);
    }

    #[test]
    fn sources_touch_only_shorter_phrases() {
        let s = b"abaababaabaababaababaabaababaabaababaababaabaab";
        let t = Text::from_bytes(s).unwrap();
        let idx = SuffixIndex::build(&t);
        let lz = crate::compressors::lz77_parse(&t, &idx);
        let g = crate::compressors::attractor_from_lz77(&lz);
        let pa = pad_attractor(&t, &idx, &g).unwrap();
        let bp = parse_from_attractor(&t, &idx, &pa).unwrap();
        check_contract(&t, &bp);
        let mut phrase_len = vec![0usize; t.len() + 1];
        for (s, e, _) in bp.copies() {
            phrase_len[s..=e].iter_mut().for_each(|l| *l = e - s + 1);
        }
        for (s, e, src) in bp.copies() {
            let len = e - s + 1;
            for q in src..src + len {
                assert!(phrase_len[q] < len, "phrase [{s},{e}] copies from {q}");
            }
        }
    }
}
