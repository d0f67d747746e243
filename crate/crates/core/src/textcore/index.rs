use super::text::Text;
use crate::util::{lcp_interval_edges, SparseTable};

/// One edge of the suffix tree of `T`, after sentinel edges are dropped.
///
/// The child is identified by its suffix-array interval `[lb, rb]`; every
/// suffix in that interval starts with the same `depth` characters of `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuffixTreeEdge {
    /// String depth of the parent node.
    pub parent_depth: usize,
    /// String depth of the child node, sentinel excluded.
    pub depth: usize,
    pub lb: usize,
    pub rb: usize,
    /// Leftmost (0-based) text position among the child's occurrences.
    pub first_occ: usize,
}

impl SuffixTreeEdge {
    pub fn label_len(&self) -> usize {
        self.depth - self.parent_depth
    }

    /// 1-based text position of the first label character (leftmost occurrence).
    pub fn first_label_pos(&self) -> usize {
        self.first_occ + self.parent_depth + 1
    }

    /// Length of `st(e)`: the path from the root through the first label character.
    pub fn st_len(&self) -> usize {
        self.parent_depth + 1
    }
}

/// Suffix array, inverse suffix array, LCP array and suffix-tree edges of a
/// text with an appended sentinel ranked below every symbol.
///
/// All arrays have length `n + 1`; row 0 is always the sentinel suffix.
#[derive(Debug, Clone)]
pub struct SuffixIndex {
    n: usize,
    sa: Vec<usize>,
    isa: Vec<usize>,
    lcp: Vec<usize>,
    edges: Vec<SuffixTreeEdge>,
    sa_min: SparseTable,
    lcp_min: SparseTable,
}

impl SuffixIndex {
    pub fn build(t: &Text) -> Self {
        let n = t.len();
        let mut s: Vec<u32> = t.ranks().to_vec();
        s.push(0);
        let sa = suffix_array(&s);
        let mut isa = vec![0; n + 1];
        for (q, &p) in sa.iter().enumerate() {
            isa[p] = q;
        }
        let lcp = kasai(&s, &sa, &isa);
        let sa_min = SparseTable::new(&sa);
        let lcp_min = SparseTable::new(&lcp);
        let edges = suffix_tree_edges(n, &sa, &lcp, &sa_min);
        SuffixIndex {
            n,
            sa,
            isa,
            lcp,
            edges,
            sa_min,
            lcp_min,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 0-based suffix start positions; `sa()[0] == n` is the sentinel suffix.
    pub fn sa(&self) -> &[usize] {
        &self.sa
    }

    pub fn isa(&self) -> &[usize] {
        &self.isa
    }

    /// `lcp()[q]` is the LCP of the suffixes at rows `q - 1` and `q`; `lcp()[0] == 0`.
    pub fn lcp(&self) -> &[usize] {
        &self.lcp
    }

    pub fn edges(&self) -> &[SuffixTreeEdge] {
        &self.edges
    }

    /// Number of suffix-tree edges once sentinel edges are removed.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Smallest suffix start in rows `[lb, rb]`.
    pub fn min_sa(&self, lb: usize, rb: usize) -> usize {
        self.sa_min.min(lb, rb)
    }

    /// Rows of all suffixes sharing their first `len` characters with the
    /// suffix starting at 0-based position `pos`.
    pub fn interval_of(&self, pos: usize, len: usize) -> (usize, usize) {
        let q = self.isa[pos];
        if len == 0 {
            return (0, self.n);
        }
        // leftmost lb with min(lcp[lb+1..=q]) >= len
        let (mut lo, mut hi) = (0, q);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.lcp_min.min(mid + 1, q) >= len {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let lb = lo;
        let (mut lo, mut hi) = (q, self.n);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.lcp_min.min(q + 1, mid) >= len {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        (lb, lo)
    }

    /// `n(n+1)/2 - Σ lcp`: the number of distinct non-empty substrings.
    pub fn count_distinct_substrings(&self) -> u64 {
        let n = self.n as u64;
        n * (n + 1) / 2 - self.lcp.iter().map(|&l| l as u64).sum::<u64>()
    }

    /// Length of the longest substring occurring at least twice (overlaps allowed).
    pub fn longest_repeated_len(&self) -> usize {
        self.lcp.iter().copied().max().unwrap_or(0)
    }
}

/// Prefix-doubling suffix array over a sequence whose last element is a unique minimum.
fn suffix_array(s: &[u32]) -> Vec<usize> {
    let len = s.len();
    let mut sa: Vec<usize> = (0..len).collect();
    let mut rank: Vec<usize> = s.iter().map(|&c| c as usize).collect();
    let mut tmp = vec![0usize; len];
    let mut k = 1;
    loop {
        let key = |i: usize| (rank[i], if i + k < len { rank[i + k] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0]] = 0;
        for w in 1..len {
            tmp[sa[w]] = tmp[sa[w - 1]] + usize::from(key(sa[w - 1]) != key(sa[w]));
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[len - 1]] == len - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

fn kasai(s: &[u32], sa: &[usize], isa: &[usize]) -> Vec<usize> {
    let len = s.len();
    let mut lcp = vec![0; len];
    let mut h = 0usize;
    for i in 0..len {
        let q = isa[i];
        if q == 0 {
            h = 0;
            continue;
        }
        let j = sa[q - 1];
        while i + h < len && j + h < len && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[q] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

fn suffix_tree_edges(
    n: usize,
    sa: &[usize],
    lcp: &[usize],
    sa_min: &SparseTable,
) -> Vec<SuffixTreeEdge> {
    let lens: Vec<usize> = sa.iter().map(|&p| n - p).collect();
    lcp_interval_edges(lcp, &lens)
        .into_iter()
        .map(|e| SuffixTreeEdge {
            parent_depth: e.parent_depth,
            depth: e.depth,
            lb: e.lb,
            rb: e.rb,
            first_occ: sa_min.min(e.lb, e.rb),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(s: &[u8]) -> SuffixIndex {
        SuffixIndex::build(&Text::from_bytes(s).unwrap())
    }

    #[test]
    fn single_character() {
        let idx = index(b"a");
        assert_eq!(idx.sa(), &[1, 0]);
        assert_eq!(idx.edge_count(), 1);
        assert_eq!(idx.count_distinct_substrings(), 1);
    }

    #[test]
    fn banana_arrays() {
        let idx = index(b"banana");
        assert_eq!(idx.sa(), &[6, 5, 3, 1, 0, 4, 2]);
        assert_eq!(idx.lcp(), &[0, 0, 1, 3, 0, 0, 2]);
        for (q, &p) in idx.sa().iter().enumerate() {
            assert_eq!(idx.isa()[p], q);
        }
    }

    #[test]
    fn distinct_substring_counts() {
        assert_eq!(index(b"ab").count_distinct_substrings(), 3);
        assert_eq!(index(b"aa").count_distinct_substrings(), 2);
        // direct enumeration gives 55 (the commonly quoted 57 overcounts)
        assert_eq!(index(b"CDABCCDABCCA").count_distinct_substrings(), 55);
    }

    #[test]
    fn longest_repeats() {
        assert_eq!(index(b"ab").longest_repeated_len(), 0);
        assert_eq!(index(b"aa").longest_repeated_len(), 1);
        assert_eq!(index(b"CDABCCDABCCA").longest_repeated_len(), 6);
    }

    #[test]
    fn unary_text_keeps_internal_nodes() {
        // root -a-> [a] -a-> [aa] -a-> aaa
        let idx = index(b"aaa");
        assert_eq!(idx.edge_count(), 3);
        assert!(idx.edges().iter().all(|e| e.label_len() == 1));
    }

    #[test]
    fn interval_of_matches_scan() {
        let t = Text::from_bytes(b"abracadabra").unwrap();
        let idx = SuffixIndex::build(&t);
        let s = t.ranks();
        for pos in 0..s.len() {
            for len in 1..=s.len() - pos {
                let (lb, rb) = idx.interval_of(pos, len);
                let mut expect: Vec<usize> = (0..s.len())
                    .filter(|&p| p + len <= s.len() && s[p..p + len] == s[pos..pos + len])
                    .collect();
                let mut got: Vec<usize> = idx.sa()[lb..=rb].to_vec();
                expect.sort_unstable();
                got.sort_unstable();
                assert_eq!(got, expect, "pos {pos} len {len}");
            }
        }
    }
}
