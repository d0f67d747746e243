//! Random access to a text through an attractor: leveled blocks around each
//! attractor position, each pointing to an occurrence of its content one
//! level down, with explicit packed characters only at the last level.

mod io;

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::textcore::{verify_attractor, AttractorSet, OccurrenceFinder, SuffixIndex, Text};

pub const DEFAULT_WORD_BITS: usize = 64;
/// Constant in the space bound `C·γ·τ·(⌈log_τ(n/γ)⌉+1)` on non-leaf words.
pub const SPACE_CONSTANT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ADagConfig {
    /// Branching parameter, at least 2.
    pub tau: usize,
    /// Machine word size in bits.
    pub w: usize,
}

impl ADagConfig {
    pub fn new(tau: usize) -> Self {
        ADagConfig {
            tau,
            w: DEFAULT_WORD_BITS,
        }
    }

    pub fn with_word_bits(mut self, w: usize) -> Self {
        self.w = w;
        self
    }
}

/// Where a block's content occurs one level down: it starts at
/// `positions[j] - len + 1 + off`, `len` being the block length, so the
/// occurrence contains attractor position `positions[j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Coord {
    off: usize,
    j: usize,
}

/// Packed characters of `T[start..start+len-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Leaf {
    start: usize,
    len: usize,
    words: Vec<u64>,
}

impl Leaf {
    fn pack(t: &Text, start: usize, len: usize, bits: usize) -> Leaf {
        let mut words = vec![0u64; (len * bits).div_ceil(64)];
        for k in 0..len {
            let code = (t.ranks()[start - 1 + k] - 1) as u64;
            let at = k * bits;
            words[at / 64] |= code << (at % 64);
            if at % 64 + bits > 64 {
                words[at / 64 + 1] |= code >> (64 - at % 64);
            }
        }
        Leaf { start, len, words }
    }

    fn code(&self, k: usize, bits: usize) -> usize {
        let at = k * bits;
        let mut v = self.words[at / 64] >> (at % 64);
        if at % 64 + bits > 64 {
            v |= self.words[at / 64 + 1] << (64 - at % 64);
        }
        (v & ((1u64 << bits) - 1)) as usize
    }
}

/// The leveled structure. Level 0 cuts the text into blocks of length
/// `⌈n/γ⌉`; level `k >= 1` keeps, around every attractor position `j`, a
/// region of `4τ` half-blocks of length `h_k = ⌈s_k/2⌉` (with
/// `s_k = ⌈n/(γτ^k)⌉`) ending at `j + 2τh_k`, plus `4τ-1` half-blocks shifted
/// by `⌊h_k/2⌋`. Regions of the last level are stored as packed characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ADag {
    n: usize,
    alphabet: Vec<u8>,
    tau: usize,
    w: usize,
    alpha: usize,
    /// Last level; 0 when the whole text is stored packed.
    depth: usize,
    positions: Vec<usize>,
    top_len: usize,
    top: Vec<Coord>,
    /// `levels[k-1]` holds `8τ-1` slots per attractor position for level `k`.
    levels: Vec<Vec<Option<Coord>>>,
    leaves: Vec<Leaf>,
}

/// Work done by one extraction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ExtractStats {
    /// Sub-queries answered; each lies inside one level-0 block.
    pub units: usize,
    pub max_hops: usize,
    pub total_hops: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceReport {
    pub n: usize,
    pub gamma: usize,
    pub tau: usize,
    pub alpha: usize,
    pub depth: usize,
    pub header_words: usize,
    pub attractor_words: usize,
    pub coordinate_words: usize,
    pub leaf_words: usize,
    pub total_words: usize,
    /// `⌈log_τ(n/γ)⌉`.
    pub log_levels: usize,
    /// Non-leaf words over `γ·τ·(⌈log_τ(n/γ)⌉+1)`.
    pub ratio: f64,
}

const HEADER_WORDS: usize = 9;

/// `⌈log_τ(n/γ)⌉`: smallest `L` with `γτ^L >= n`.
pub fn ceil_log_tau(n: usize, gamma: usize, tau: usize) -> usize {
    let mut l = 0;
    let mut reach = gamma as u128;
    while reach < n as u128 {
        reach *= tau as u128;
        l += 1;
    }
    l
}

/// `s_k = ⌈n/(γτ^k)⌉`.
fn block_len(n: usize, gamma: usize, tau: usize, k: usize) -> usize {
    let mut d = gamma as u128;
    for _ in 0..k {
        d *= tau as u128;
        if d >= n as u128 {
            return 1;
        }
    }
    (n as u128).div_ceil(d) as usize
}

fn bits_per_symbol(sigma: usize) -> usize {
    (crate::util::ceil_log2(sigma) as usize).max(1)
}

/// Query unit `⌊w·log_τ(n/γ)/log2 σ⌋`, at least 1 and at most `n`; a unary
/// alphabet counts as one bit per symbol.
fn query_unit(n: usize, gamma: usize, tau: usize, sigma: usize, w: usize) -> usize {
    let levels = (n as f64 / gamma as f64).ln() / (tau as f64).ln();
    let per_symbol = (sigma.max(2) as f64).log2();
    let a = (w as f64 * levels / per_symbol).floor();
    if a.is_finite() && a >= 1.0 {
        (a as usize).min(n)
    } else {
        1
    }
}

impl ADag {
    pub fn build(
        t: &Text,
        idx: &SuffixIndex,
        g: &AttractorSet,
        config: ADagConfig,
    ) -> Result<ADag> {
        if config.tau < 2 {
            return Err(Error::ParameterOutOfRange(format!(
                "tau = {} must be at least 2",
                config.tau
            )));
        }
        if config.w == 0 {
            return Err(Error::ParameterOutOfRange(
                "word size must be positive".into(),
            ));
        }
        let v = verify_attractor(t, idx, g)?;
        if !v.valid {
            return Err(Error::InvalidAttractor(format!(
                "{:?} is not an attractor",
                g.positions()
            )));
        }
        let n = t.len();
        let gamma = g.len();
        let tau = config.tau;
        let alpha = query_unit(n, gamma, tau, t.sigma(), config.w);
        let bits = bits_per_symbol(t.sigma());
        let positions = g.positions().to_vec();
        let mut dag = ADag {
            n,
            alphabet: t.alphabet().to_vec(),
            tau,
            w: config.w,
            alpha,
            depth: 0,
            positions,
            top_len: block_len(n, gamma, tau, 0),
            top: Vec::new(),
            levels: Vec::new(),
            leaves: Vec::new(),
        };
        if n < alpha * gamma {
            dag.leaves.push(Leaf::pack(t, 1, n, bits));
            return Ok(dag);
        }
        let mut depth = 1;
        while block_len(n, gamma, tau, depth) >= 4 * alpha {
            depth += 1;
        }
        dag.depth = depth;
        let finder = OccurrenceFinder::new(idx, g)?;
        let locate = |a: usize, b: usize| -> Result<Coord> {
            let (s, e) = finder.find(a, b)?.ok_or_else(|| {
                Error::Internal(format!(
                    "T[{a}..{b}] has no occurrence crossing the attractor"
                ))
            })?;
            let j = dag.positions.partition_point(|&p| p < s);
            let p = dag.positions[j];
            debug_assert!(p <= e);
            Ok(Coord {
                off: s + (b - a) - p,
                j,
            })
        };
        let top: Vec<Coord> = (0..n.div_ceil(dag.top_len))
            .map(|b| locate(b * dag.top_len + 1, ((b + 1) * dag.top_len).min(n)))
            .collect::<Result<_>>()?;
        let mut levels = Vec::with_capacity(depth - 1);
        for k in 1..depth {
            let mut slots = Vec::with_capacity(gamma * dag.slots());
            for jidx in 0..gamma {
                for slot in 0..dag.slots() {
                    slots.push(match dag.half_block(k, jidx, slot) {
                        Some((a, b)) => Some(locate(a, b)?),
                        None => None,
                    });
                }
            }
            levels.push(slots);
        }
        let leaves = (0..gamma)
            .map(|jidx| {
                let (a, b) = dag.region(depth, jidx);
                Leaf::pack(t, a, b - a + 1, bits)
            })
            .collect();
        dag.top = top;
        dag.levels = levels;
        dag.leaves = leaves;
        Ok(dag)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> usize {
        self.positions.len()
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Characters per query unit.
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// Index of the packed level; 0 when the text is stored plainly.
    pub fn depth(&self) -> usize {
        self.depth
    }

    fn slots(&self) -> usize {
        8 * self.tau - 1
    }

    fn half_len(&self, k: usize) -> usize {
        block_len(self.n, self.gamma(), self.tau, k).div_ceil(2)
    }

    /// First cell of the level-`k` region around `positions[jidx]`, possibly before the text.
    fn region_base(&self, k: usize, jidx: usize) -> i64 {
        self.positions[jidx] as i64 - (2 * self.tau * self.half_len(k)) as i64 + 1
    }

    fn clamp(&self, a: i64, b: i64) -> Option<(usize, usize)> {
        let (a, b) = (a.max(1), b.min(self.n as i64));
        (a <= b).then_some((a as usize, b as usize))
    }

    fn region(&self, k: usize, jidx: usize) -> (usize, usize) {
        let base = self.region_base(k, jidx);
        self.clamp(base, base + (4 * self.tau * self.half_len(k)) as i64 - 1)
            .expect("regions contain their attractor position")
    }

    /// Text interval of a half-block after clamping; slots `0..4τ` are the
    /// aligned ones, the rest the shifted ones.
    fn half_block(&self, k: usize, jidx: usize, slot: usize) -> Option<(usize, usize)> {
        let h = self.half_len(k) as i64;
        let base = self.region_base(k, jidx);
        let (start, m) = if slot < 4 * self.tau {
            (base, slot as i64)
        } else {
            (base + h / 2, (slot - 4 * self.tau) as i64)
        };
        self.clamp(start + m * h, start + (m + 1) * h - 1)
    }

    /// A half-block of level `k` around `positions[jidx]` containing `[p, p+len-1]`.
    fn containing_slot(&self, k: usize, jidx: usize, p: usize, len: usize) -> Option<usize> {
        let h = self.half_len(k) as i64;
        let x = p as i64 - self.region_base(k, jidx);
        let last = x + len as i64 - 1;
        if x < 0 || last >= 4 * self.tau as i64 * h {
            return None;
        }
        if x / h == last / h {
            return Some((x / h) as usize);
        }
        let d = h / 2;
        let m = (x - d) / h;
        (x >= d && (last - d) / h == m && m < 4 * self.tau as i64 - 1)
            .then(|| 4 * self.tau + m as usize)
    }

    fn follow(&self, c: Coord, block: (usize, usize), p: usize) -> usize {
        let len = block.1 - block.0 + 1;
        self.positions[c.j] + 1 + c.off - len + (p - block.0)
    }

    /// Characters `T[p..p+len-1]`, inside one level-0 block; returns the hop count.
    fn sub_query(&self, p: usize, len: usize, out: &mut Vec<u8>) -> Result<usize> {
        let broken = || Error::Internal(format!("lost track of T[{p}..{}]", p + len - 1));
        let bits = bits_per_symbol(self.alphabet.len());
        let (leaf, at) = if self.depth == 0 {
            (&self.leaves[0], p)
        } else {
            let b = (p - 1) / self.top_len;
            let block = (b * self.top_len + 1, ((b + 1) * self.top_len).min(self.n));
            let mut c = self.top[b];
            let mut q = self.follow(c, block, p);
            for k in 1..self.depth {
                let slot = self.containing_slot(k, c.j, q, len).ok_or_else(broken)?;
                let block = self.half_block(k, c.j, slot).ok_or_else(broken)?;
                let next = self.levels[k - 1][c.j * self.slots() + slot].ok_or_else(broken)?;
                q = self.follow(next, block, q);
                c = next;
            }
            (&self.leaves[c.j], q)
        };
        if at < leaf.start || at + len > leaf.start + leaf.len {
            return Err(broken());
        }
        for k in 0..len {
            out.push(self.alphabet[leaf.code(at - leaf.start + k, bits)]);
        }
        Ok(self.depth)
    }

    pub fn extract(&self, pos: usize, len: usize) -> Result<Vec<u8>> {
        self.extract_with_stats(pos, len).map(|(s, _)| s)
    }

    /// `T[pos..pos+len-1]`, answered in units of at most `alpha` characters,
    /// each cut further at level-0 block borders.
    pub fn extract_with_stats(&self, pos: usize, len: usize) -> Result<(Vec<u8>, ExtractStats)> {
        if pos == 0 || len == 0 || pos + len - 1 > self.n {
            return Err(Error::RangeOutOfBounds {
                pos,
                len,
                n: self.n,
            });
        }
        let mut out = Vec::with_capacity(len);
        let mut stats = ExtractStats::default();
        let end = pos + len;
        let mut p = pos;
        while p < end {
            let unit_end = (p + self.alpha).min(end);
            while p < unit_end {
                let block_end = if self.depth == 0 {
                    unit_end
                } else {
                    (((p - 1) / self.top_len + 1) * self.top_len + 1).min(unit_end)
                };
                let hops = self.sub_query(p, block_end - p, &mut out)?;
                stats.units += 1;
                stats.total_hops += hops;
                stats.max_hops = stats.max_hops.max(hops);
                p = block_end;
            }
        }
        Ok((out, stats))
    }

    pub fn space_report(&self) -> SpaceReport {
        let gamma = self.gamma();
        let coordinate_words =
            2 * (self.top.len() + self.levels.iter().map(|l| l.len()).sum::<usize>());
        let leaf_words: usize = self.leaves.iter().map(|l| l.words.len()).sum();
        let header_words = HEADER_WORDS + self.alphabet.len().div_ceil(8);
        let attractor_words = gamma;
        let log_levels = ceil_log_tau(self.n, gamma, self.tau);
        let non_leaf = header_words + attractor_words + coordinate_words;
        SpaceReport {
            n: self.n,
            gamma,
            tau: self.tau,
            alpha: self.alpha,
            depth: self.depth,
            header_words,
            attractor_words,
            coordinate_words,
            leaf_words,
            total_words: non_leaf + leaf_words,
            log_levels,
            ratio: non_leaf as f64 / (gamma * self.tau * (log_levels + 1)) as f64,
        }
    }

    /// Checks that every substring of length at most `⌊h_k/2⌋ + 1` inside a
    /// region of a non-packed level lies in one of its half-blocks.
    pub fn check_containment(&self) -> bool {
        (1..self.depth).all(|k| {
            let h = self.half_len(k);
            let len = h / 2 + 1;
            (0..self.gamma()).all(|jidx| {
                let base = self.region_base(k, jidx);
                (0..4 * self.tau * h + 1 - len).all(|x| {
                    let p = base + x as i64;
                    if p < 1 || p + len as i64 - 1 > self.n as i64 {
                        return true;
                    }
                    self.containing_slot(k, jidx, p as usize, len)
                        .and_then(|s| self.half_block(k, jidx, s))
                        .is_some_and(|(a, b)| a <= p as usize && p as usize + len - 1 <= b)
                })
            })
        })
    }
}

impl SpaceReport {
    /// Whether non-leaf words stay within `C·γ·τ·(⌈log_τ(n/γ)⌉+1)`.
    pub fn within_bound(&self) -> bool {
        self.total_words - self.leaf_words
            <= SPACE_CONSTANT * self.gamma * self.tau * (self.log_levels + 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let rows = [
            ("n", self.n.to_string()),
            ("gamma", self.gamma.to_string()),
            ("tau", self.tau.to_string()),
            ("query unit", self.alpha.to_string()),
            ("packed level", self.depth.to_string()),
            ("header words", self.header_words.to_string()),
            ("attractor words", self.attractor_words.to_string()),
            ("coordinate words", self.coordinate_words.to_string()),
            ("leaf words", self.leaf_words.to_string()),
            ("total words", self.total_words.to_string()),
            ("ratio", format!("{:.4}", self.ratio)),
        ];
        for (k, v) in rows {
            let _ = writeln!(s, "{k:<18} {v:>12}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compressors::{attractor_from_lz77, lz77_parse};
    use crate::textcore::Provenance;
    use proptest::prelude::*;

    fn build(s: &[u8], g: Option<&[usize]>, config: ADagConfig) -> (Text, ADag) {
        let t = Text::from_bytes(s).unwrap();
        let idx = SuffixIndex::build(&t);
        let g = match g {
            Some(p) => AttractorSet::new(t.len(), p.iter().copied(), Provenance::User).unwrap(),
            None => attractor_from_lz77(&lz77_parse(&t, &idx)),
        };
        let d = ADag::build(&t, &idx, &g, config).unwrap();
        (t, d)
    }

    fn check_all(t: &Text, d: &ADag) {
        let n = t.len();
        let bound = ceil_log_tau(n, d.gamma(), d.tau()) + 2;
        for i in 1..=n {
            for l in 1..=n + 1 - i {
                let (s, stats) = d.extract_with_stats(i, l).unwrap();
                assert_eq!(s, t.slice_bytes(i, i + l - 1), "i = {i}, l = {l}");
                assert!(stats.max_hops <= bound);
            }
        }
    }

    #[test]
    fn example_text() {
        for tau in [2, 4, 8] {
            for w in [1, 2, 64] {
                let config = ADagConfig::new(tau).with_word_bits(w);
                let (t, d) = build(b"CDABCCDABCCA", Some(&[4, 7, 11, 12]), config);
                check_all(&t, &d);
                assert_eq!(d.extract(6, 5).unwrap(), b"CDABC");
                assert_eq!(
                    d.extract(12, 3),
                    Err(Error::RangeOutOfBounds {
                        pos: 12,
                        len: 3,
                        n: 12
                    })
                );
                assert!(d.check_containment());
            }
        }
    }

    #[test]
    fn full_attractor_is_one_level() {
        let (t, d) = build(b"abcab", Some(&[1, 2, 3, 4, 5]), ADagConfig::new(2));
        check_all(&t, &d);
        assert_eq!(d.depth(), 1);
        assert_eq!(d.space_report().coordinate_words, 2 * 5);
    }

    #[test]
    fn unary_text_deepens_with_small_words() {
        let (t, d) = build(
            &[b'a'; 256],
            Some(&[1]),
            ADagConfig::new(2).with_word_bits(1),
        );
        check_all(&t, &d);
        assert!(d.depth() > 2);
        assert!(d.check_containment());
        assert!(d.space_report().within_bound());
    }

    #[test]
    fn unary_space_ratio() {
        for tau in [2, 4, 8] {
            let (_, d) = build(&[b'a'; 4096], Some(&[1]), ADagConfig::new(tau));
            let r = d.space_report();
            assert!(r.ratio < SPACE_CONSTANT as f64 && r.within_bound(), "{r:?}");
        }
    }

    #[test]
    fn larger_tau_means_fewer_levels() {
        let config = |tau| ADagConfig::new(tau).with_word_bits(1);
        let (_, d2) = build(&[b'a'; 4096], Some(&[1]), config(2));
        let (_, d4) = build(&[b'a'; 4096], Some(&[1]), config(4));
        assert!(d4.depth() < d2.depth());
        let per_level = |d: &ADag| d.levels[0].len();
        assert!(per_level(&d4) > per_level(&d2));
    }

    #[test]
    fn rejects_bad_input() {
        let t = Text::from_bytes(b"ab").unwrap();
        let idx = SuffixIndex::build(&t);
        let g = AttractorSet::new(2, [1], Provenance::User).unwrap();
        assert!(matches!(
            ADag::build(&t, &idx, &g, ADagConfig::new(2)),
            Err(Error::InvalidAttractor(_))
        ));
        let g = AttractorSet::full(2);
        assert!(matches!(
            ADag::build(&t, &idx, &g, ADagConfig::new(1)),
            Err(Error::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn packing_roundtrip_across_words() {
        let s: Vec<u8> = (0..200u32).map(|i| (i * 37 % 251) as u8).collect();
        let t = Text::from_bytes(&s).unwrap();
        let leaf = Leaf::pack(&t, 1, 200, 8);
        for k in 0..200 {
            assert_eq!(t.alphabet()[leaf.code(k, 8)], s[k]);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn extraction_matches_slicing(
            s in proptest::collection::vec(b'a'..b'd', 1..80),
            tau in 2usize..6,
            w in 1usize..4,
        ) {
            let (t, d) = build(&s, None, ADagConfig::new(tau).with_word_bits(w));
            prop_assert!(d.check_containment());
            check_all(&t, &d);
        }
    }
}
