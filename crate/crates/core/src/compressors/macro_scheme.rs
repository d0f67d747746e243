use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{symbol_from_json, symbol_to_json};
use crate::error::{Error, Result};
use crate::textcore::{AttractorSet, Provenance};

/// One directive of a macro scheme, all positions 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Directive {
    Copy {
        dst: (usize, usize),
        src: (usize, usize),
    },
    Assign {
        pos: usize,
        ch: u8,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroScheme {
    n: usize,
    directives: Vec<Directive>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub text: Vec<u8>,
    /// Longest chain of copies plus one; only for schemes that partition the text.
    pub height: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct SchemeJson {
    n: usize,
    dirs: Vec<DirectiveJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DirectiveJson {
    Copy { dst: [usize; 2], src: [usize; 2] },
    Assign { pos: usize, ch: String },
}

impl MacroScheme {
    pub fn new(n: usize, directives: Vec<Directive>) -> Self {
        MacroScheme { n, directives }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directives(&self) -> &[Directive] {
        &self.directives
    }

    /// Number of directives `b`.
    pub fn size(&self) -> usize {
        self.directives.len()
    }

    /// True when the destinations tile `[1..n]` exactly once.
    pub fn is_partition(&self) -> bool {
        let mut dsts: Vec<(usize, usize)> = self
            .directives
            .iter()
            .map(|d| match *d {
                Directive::Copy { dst, .. } => dst,
                Directive::Assign { pos, .. } => (pos, pos),
            })
            .collect();
        dsts.sort_unstable();
        let mut next = 1;
        for (a, b) in dsts {
            if a != next || b < a {
                return false;
            }
            next = b + 1;
        }
        next == self.n + 1
    }

    fn check_ranges(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::EmptyText);
        }
        let check = |(a, b): (usize, usize)| {
            if a == 0 || a > b || b > n {
                Err(Error::IntervalOutOfRange {
                    start: a,
                    end: b,
                    n,
                })
            } else {
                Ok(())
            }
        };
        for d in &self.directives {
            match *d {
                Directive::Copy { dst, src } => {
                    check(dst)?;
                    check(src)?;
                    if dst.1 - dst.0 != src.1 - src.0 {
                        return Err(Error::Format(format!(
                            "copy [{}, {}] <- [{}, {}] has unequal lengths",
                            dst.0, dst.1, src.0, src.1
                        )));
                    }
                }
                Directive::Assign { pos, .. } => check((pos, pos))?,
            }
        }
        Ok(())
    }

    /// Resolves every position by propagating explicit symbols through copies
    /// until a fixpoint.
    pub fn decode(&self) -> Result<Decoded> {
        self.check_ranges()?;
        let n = self.n;
        let mut covered = vec![false; n + 1];
        // by_src[q] lists the copy directives whose source contains q
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        let mut val: Vec<Option<u8>> = vec![None; n + 1];
        let mut queue = VecDeque::new();
        let mut order = Vec::with_capacity(n);
        for (k, d) in self.directives.iter().enumerate() {
            match *d {
                Directive::Copy { dst, src } => {
                    covered[dst.0..=dst.1].iter_mut().for_each(|c| *c = true);
                    for q in src.0..=src.1 {
                        by_src[q].push(k);
                    }
                }
                Directive::Assign { pos, ch } => {
                    covered[pos] = true;
                    match val[pos] {
                        Some(c) if c != ch => return Err(Error::InconsistentDirectives(pos)),
                        Some(_) => {}
                        None => {
                            val[pos] = Some(ch);
                            queue.push_back(pos);
                            order.push(pos);
                        }
                    }
                }
            }
        }
        if let Some(p) = (1..=n).find(|&p| !covered[p]) {
            return Err(Error::UncoveredPosition(p));
        }
        while let Some(q) = queue.pop_front() {
            for &k in &by_src[q] {
                if let Directive::Copy { dst, src } = self.directives[k] {
                    let p = dst.0 + (q - src.0);
                    if val[p].is_none() {
                        val[p] = val[q];
                        queue.push_back(p);
                        order.push(p);
                    }
                }
            }
        }
        if let Some(p) = (1..=n).find(|&p| val[p].is_none()) {
            return Err(Error::UnresolvableCycle(p));
        }
        let text: Vec<u8> = val[1..].iter().map(|c| c.unwrap()).collect();
        for d in &self.directives {
            if let Directive::Copy { dst, src } = *d {
                if let Some(off) =
                    (0..=dst.1 - dst.0).find(|&o| text[dst.0 - 1 + o] != text[src.0 - 1 + o])
                {
                    return Err(Error::InconsistentDirectives(dst.0 + off));
                }
            }
        }

        let height = self.is_partition().then(|| {
            let mut source = vec![0usize; n + 1];
            for d in &self.directives {
                if let Directive::Copy { dst, src } = *d {
                    for o in 0..=dst.1 - dst.0 {
                        source[dst.0 + o] = src.0 + o;
                    }
                }
            }
            // resolution order is topological: each position follows its unique source
            let mut h = vec![0usize; n + 1];
            for &p in &order {
                h[p] = if source[p] == 0 { 1 } else { h[source[p]] + 1 };
            }
            h.into_iter().max().unwrap_or(0)
        });
        Ok(Decoded { text, height })
    }

    pub fn to_json(&self) -> String {
        let raw = SchemeJson {
            n: self.n,
            dirs: self
                .directives
                .iter()
                .map(|d| match *d {
                    Directive::Copy { dst, src } => DirectiveJson::Copy {
                        dst: [dst.0, dst.1],
                        src: [src.0, src.1],
                    },
                    Directive::Assign { pos, ch } => DirectiveJson::Assign {
                        pos,
                        ch: symbol_to_json(ch),
                    },
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("scheme serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SchemeJson = serde_json::from_str(s)?;
        let directives = raw
            .dirs
            .into_iter()
            .map(|d| match d {
                DirectiveJson::Copy { dst, src } => Ok(Directive::Copy {
                    dst: (dst[0], dst[1]),
                    src: (src[0], src[1]),
                }),
                DirectiveJson::Assign { pos, ch } => Ok(Directive::Assign {
                    pos,
                    ch: symbol_from_json(&ch)?,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MacroScheme::new(raw.n, directives))
    }
}

/// Destination endpoints of copies plus explicitly assigned positions.
///
/// Fails when the scheme does not decode.
pub fn attractor_from_macro(ms: &MacroScheme) -> Result<AttractorSet> {
    ms.decode()?;
    let positions = ms.directives.iter().flat_map(|d| match *d {
        Directive::Copy { dst, .. } => [dst.0, dst.1],
        Directive::Assign { pos, .. } => [pos, pos],
    });
    AttractorSet::new(ms.n, positions, Provenance::Macro)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textcore::{verify_attractor, SuffixIndex, Text};

    fn copy(dst: (usize, usize), src: (usize, usize)) -> Directive {
        Directive::Copy { dst, src }
    }

    fn assign(pos: usize, ch: u8) -> Directive {
        Directive::Assign { pos, ch }
    }

    #[test]
    fn bidirectional_example_decodes() {
        // abab: [1..2] <- [3..4], 3:a, 4:b
        let ms = MacroScheme::new(
            4,
            vec![copy((1, 2), (3, 4)), assign(3, b'a'), assign(4, b'b')],
        );
        let d = ms.decode().unwrap();
        assert_eq!(d.text, b"abab");
        assert_eq!(d.height, Some(2));
        let g = attractor_from_macro(&ms).unwrap();
        assert_eq!(g.positions(), &[1, 2, 3, 4]);
    }

    #[test]
    fn overlapping_copy_chain() {
        // aaaa from one explicit a and a shifted self-copy
        let ms = MacroScheme::new(4, vec![assign(1, b'a'), copy((2, 4), (1, 3))]);
        let d = ms.decode().unwrap();
        assert_eq!(d.text, b"aaaa");
        assert_eq!(d.height, Some(4));
    }

    #[test]
    fn decode_errors() {
        let gap = MacroScheme::new(3, vec![assign(1, b'a'), assign(3, b'b')]);
        assert_eq!(gap.decode(), Err(Error::UncoveredPosition(2)));

        let cycle = MacroScheme::new(2, vec![copy((1, 1), (2, 2)), copy((2, 2), (1, 1))]);
        assert_eq!(cycle.decode(), Err(Error::UnresolvableCycle(1)));

        let clash = MacroScheme::new(
            2,
            vec![assign(1, b'a'), assign(2, b'b'), copy((2, 2), (1, 1))],
        );
        assert_eq!(clash.decode(), Err(Error::InconsistentDirectives(2)));

        let bad = MacroScheme::new(2, vec![copy((1, 2), (2, 3))]);
        assert!(matches!(
            bad.decode(),
            Err(Error::IntervalOutOfRange { .. })
        ));
    }

    #[test]
    fn non_partition_has_no_height() {
        let ms = MacroScheme::new(
            2,
            vec![assign(1, b'a'), assign(2, b'a'), copy((2, 2), (1, 1))],
        );
        let d = ms.decode().unwrap();
        assert_eq!(d.text, b"aa");
        assert_eq!(d.height, None);
    }

    #[test]
    fn induced_attractor_verifies() {
        let s = b"CDABCCDABCCA";
        // CDABC | CDABC <- [1..5] | CC <- [5..6] | A
        let ms = MacroScheme::new(
            12,
            vec![
                assign(1, b'C'),
                assign(2, b'D'),
                assign(3, b'A'),
                assign(4, b'B'),
                copy((5, 5), (1, 1)),
                copy((6, 10), (1, 5)),
                copy((11, 11), (5, 5)),
                copy((12, 12), (3, 3)),
            ],
        );
        assert_eq!(ms.decode().unwrap().text, s);
        let t = Text::from_bytes(s).unwrap();
        let g = attractor_from_macro(&ms).unwrap();
        assert!(
            verify_attractor(&t, &SuffixIndex::build(&t), &g)
                .unwrap()
                .valid
        );
    }

    #[test]
    fn json_roundtrip() {
        let ms = MacroScheme::new(
            4,
            vec![copy((1, 2), (3, 4)), assign(3, b'a'), assign(4, b'b')],
        );
        let json = ms.to_json();
        assert_eq!(
            json,
            r#"{"n":4,"dirs":[{"dst":[1,2],"src":[3,4]},{"pos":3,"ch":"a"},{"pos":4,"ch":"b"}]}"#
        );
        assert_eq!(MacroScheme::from_json(&json).unwrap(), ms);
    }
}
