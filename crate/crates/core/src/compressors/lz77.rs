use serde::{Deserialize, Serialize};

use super::macro_scheme::{Directive, MacroScheme};
use super::{symbol_from_json, symbol_to_json};
use crate::error::{Error, Result};
use crate::textcore::{AttractorSet, Provenance, SuffixIndex, Text};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lz77Phrase {
    Literal(u8),
    /// Copy of `T[src..src+len-1]` (1-based), which ends before the phrase starts.
    Copy {
        src: usize,
        len: usize,
    },
}

impl Lz77Phrase {
    pub fn len(&self) -> usize {
        match *self {
            Lz77Phrase::Literal(_) => 1,
            Lz77Phrase::Copy { len, .. } => len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Greedy LZ77 factorization without self-references and without trailing
/// characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lz77Parse {
    phrases: Vec<Lz77Phrase>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PhraseJson {
    Lit { lit: String },
    Copy { src: usize, len: usize },
}

impl Lz77Parse {
    /// Wraps phrases after checking that every copy refers strictly to earlier text.
    pub fn new(phrases: Vec<Lz77Phrase>) -> Result<Self> {
        let mut start = 1usize;
        for (k, ph) in phrases.iter().enumerate() {
            if let Lz77Phrase::Copy { src, len } = *ph {
                if len == 0 || src == 0 || src + len > start {
                    return Err(Error::Format(format!(
                        "phrase {k}: copy [{src}, +{len}) does not end before position {start}"
                    )));
                }
            }
            start += ph.len();
        }
        if phrases.is_empty() {
            return Err(Error::EmptyText);
        }
        Ok(Lz77Parse { phrases })
    }

    pub fn phrases(&self) -> &[Lz77Phrase] {
        &self.phrases
    }

    /// Number of phrases `z`.
    pub fn z(&self) -> usize {
        self.phrases.len()
    }

    pub fn text_len(&self) -> usize {
        self.phrases.iter().map(Lz77Phrase::len).sum()
    }

    pub fn decode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.text_len());
        for ph in &self.phrases {
            match *ph {
                Lz77Phrase::Literal(c) => out.push(c),
                Lz77Phrase::Copy { src, len } => {
                    for k in 0..len {
                        out.push(out[src - 1 + k]);
                    }
                }
            }
        }
        out
    }

    /// The same factorization written as a bidirectional parse.
    pub fn to_macro_scheme(&self) -> MacroScheme {
        let mut start = 1;
        let mut dirs = Vec::with_capacity(self.phrases.len());
        for ph in &self.phrases {
            dirs.push(match *ph {
                Lz77Phrase::Literal(ch) => Directive::Assign { pos: start, ch },
                Lz77Phrase::Copy { src, len } => Directive::Copy {
                    dst: (start, start + len - 1),
                    src: (src, src + len - 1),
                },
            });
            start += ph.len();
        }
        MacroScheme::new(self.text_len(), dirs)
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<PhraseJson> = self
            .phrases
            .iter()
            .map(|ph| match *ph {
                Lz77Phrase::Literal(c) => PhraseJson::Lit {
                    lit: symbol_to_json(c),
                },
                Lz77Phrase::Copy { src, len } => PhraseJson::Copy { src, len },
            })
            .collect();
        serde_json::to_string(&raw).expect("parse serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Vec<PhraseJson> = serde_json::from_str(s)?;
        let phrases = raw
            .into_iter()
            .map(|p| match p {
                PhraseJson::Lit { lit } => symbol_from_json(&lit).map(Lz77Phrase::Literal),
                PhraseJson::Copy { src, len } => Ok(Lz77Phrase::Copy { src, len }),
            })
            .collect::<Result<Vec<_>>>()?;
        Lz77Parse::new(phrases)
    }
}

/// Greedy leftmost-longest parse: at each position take the longest prefix of
/// the remaining text that also occurs entirely before it, citing the leftmost
/// such occurrence; a literal only when the next symbol never occurred before.
pub fn lz77_parse(t: &Text, idx: &SuffixIndex) -> Lz77Parse {
    let n = t.len();
    let mut phrases = Vec::new();
    let mut i = 0;
    while i < n {
        // feasible(l): some occurrence of T[i..i+l) starts at s with s + l <= i
        let feasible = |l: usize| {
            let (lb, rb) = idx.interval_of(i, l);
            idx.min_sa(lb, rb) + l <= i
        };
        let (mut lo, mut hi) = (0, (n - i).min(i));
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        if lo == 0 {
            phrases.push(Lz77Phrase::Literal(t.byte_at(i + 1)));
            i += 1;
        } else {
            let (lb, rb) = idx.interval_of(i, lo);
            phrases.push(Lz77Phrase::Copy {
                src: idx.min_sa(lb, rb) + 1,
                len: lo,
            });
            i += lo;
        }
    }
    Lz77Parse { phrases }
}

/// Phrase-end positions; every substring has a primary occurrence crossing one.
pub fn attractor_from_lz77(p: &Lz77Parse) -> AttractorSet {
    let ends = p.phrases.iter().scan(0usize, |end, ph| {
        *end += ph.len();
        Some(*end)
    });
    AttractorSet::new(p.text_len(), ends, Provenance::Lz77)
        .expect("phrase ends lie inside the text")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textcore::verify_attractor;

    /// Quadratic reference: longest previous non-overlapping match, leftmost source.
    fn naive_parse(s: &[u8]) -> Vec<Lz77Phrase> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < s.len() {
            let mut best = (0, 0);
            for src in 0..i {
                let mut l = 0;
                while i + l < s.len() && src + l < i && s[src + l] == s[i + l] {
                    l += 1;
                }
                if l > best.1 {
                    best = (src, l);
                }
            }
            if best.1 == 0 {
                out.push(Lz77Phrase::Literal(s[i]));
                i += 1;
            } else {
                out.push(Lz77Phrase::Copy {
                    src: best.0 + 1,
                    len: best.1,
                });
                i += best.1;
            }
        }
        out
    }

    fn parse(s: &[u8]) -> Lz77Parse {
        let t = Text::from_bytes(s).unwrap();
        lz77_parse(&t, &SuffixIndex::build(&t))
    }

    #[test]
    fn examples() {
        assert_eq!(parse(b"a").phrases(), &[Lz77Phrase::Literal(b'a')]);
        assert_eq!(
            parse(b"aaaa").phrases(),
            &[
                Lz77Phrase::Literal(b'a'),
                Lz77Phrase::Copy { src: 1, len: 1 },
                Lz77Phrase::Copy { src: 1, len: 2 },
            ]
        );
        let p = parse(b"CDABCCDABCCA");
        assert_eq!(p.z(), 8);
        assert_eq!(p.phrases()[5], Lz77Phrase::Copy { src: 1, len: 5 });
        assert_eq!(p.decode(), b"CDABCCDABCCA");
    }

    #[test]
    fn matches_naive_reference() {
        let samples: [&[u8]; 7] = [
            b"abracadabra",
            b"mississippi",
            b"abababababab",
            b"aabbaabbaabbab",
            b"the quick brown fox jumps over the lazy dog the end",
            b"xyzzyxyzzyxzy",
            b"abaababaabaababaababa",
        ];
        for s in samples {
            assert_eq!(
                parse(s).phrases(),
                naive_parse(s).as_slice(),
                "{:?}",
                String::from_utf8_lossy(s)
            );
        }
    }

    #[test]
    fn induced_attractors() {
        assert_eq!(attractor_from_lz77(&parse(b"a")).positions(), &[1]);
        assert_eq!(attractor_from_lz77(&parse(b"aaaa")).positions(), &[1, 2, 4]);
        let s = b"CDABCCDABCCA";
        let g = attractor_from_lz77(&parse(s));
        assert_eq!(g.positions(), &[1, 2, 3, 4, 5, 10, 11, 12]);
        let t = Text::from_bytes(s).unwrap();
        assert!(
            verify_attractor(&t, &SuffixIndex::build(&t), &g)
                .unwrap()
                .valid
        );
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let p = parse(b"aaaa");
        let json = p.to_json();
        assert_eq!(json, r#"[{"lit":"a"},{"src":1,"len":1},{"src":1,"len":2}]"#);
        assert_eq!(Lz77Parse::from_json(&json).unwrap(), p);
        // self-referential copy is rejected
        assert!(Lz77Parse::from_json(r#"[{"lit":"a"},{"src":1,"len":2}]"#).is_err());
    }
}
