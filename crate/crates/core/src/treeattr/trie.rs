use std::cmp::Ordering;

use super::tree::LabeledTree;
use crate::util::lcp_interval_edges;

/// Edge of the compacted trie of reversed root-to-node label sequences.
///
/// The strings in rows `lb..=rb` all share their first `depth` symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrieEdge {
    pub parent_depth: usize,
    pub depth: usize,
    pub lb: usize,
    pub rb: usize,
}

impl TrieEdge {
    /// Length of the string read from the trie root through this edge's first symbol.
    pub fn st_len(&self) -> usize {
        self.parent_depth + 1
    }
}

/// Compacted trie over `R(v)`, the labels read upward from each non-root node
/// `v` to the root.
///
/// A downward path of length `k` ending at `v` spells the reverse of the
/// first `k` symbols of `R(v)`, so distinct downward path labels correspond to
/// positions in this trie and their occurrences to the tree nodes stored below.
#[derive(Debug, Clone)]
pub struct ReversedPathTrie {
    /// Tree nodes sharing each distinct string, rows in sorted order.
    rows: Vec<Vec<usize>>,
    edges: Vec<TrieEdge>,
}

fn compare_up(tree: &LabeledTree, mut a: usize, mut b: usize) -> (Ordering, usize) {
    let mut common = 0;
    loop {
        if a == b {
            return (Ordering::Equal, common + tree.depth(a));
        }
        match (a == 0, b == 0) {
            (true, true) => return (Ordering::Equal, common),
            (true, false) => return (Ordering::Less, common),
            (false, true) => return (Ordering::Greater, common),
            _ => {}
        }
        let (la, lb) = (tree.label_above(a), tree.label_above(b));
        if la != lb {
            return (la.cmp(&lb), common);
        }
        common += 1;
        a = tree.parent(a).expect("non-root");
        b = tree.parent(b).expect("non-root");
    }
}

impl ReversedPathTrie {
    pub fn build(tree: &LabeledTree) -> Self {
        let mut nodes: Vec<usize> = (1..tree.node_count()).collect();
        nodes.sort_by(|&a, &b| compare_up(tree, a, b).0);
        let mut rows: Vec<Vec<usize>> = Vec::new();
        let mut lcp = Vec::new();
        let mut lens = Vec::new();
        for &v in &nodes {
            if let Some(last) = rows.last_mut() {
                let (ord, common) = compare_up(tree, last[0], v);
                if ord == Ordering::Equal {
                    last.push(v);
                    continue;
                }
                lcp.push(common);
            } else {
                lcp.push(0);
            }
            rows.push(vec![v]);
            lens.push(tree.depth(v));
        }
        let edges = lcp_interval_edges(&lcp, &lens)
            .into_iter()
            .map(|e| TrieEdge {
                parent_depth: e.parent_depth,
                depth: e.depth,
                lb: e.lb,
                rb: e.rb,
            })
            .collect();
        ReversedPathTrie { rows, edges }
    }

    pub fn edges(&self) -> &[TrieEdge] {
        &self.edges
    }

    /// Number of trie edges `N`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Tree nodes at which some occurrence of the edge's string ends.
    pub fn occurrences(&self, e: &TrieEdge) -> impl Iterator<Item = usize> + '_ {
        self.rows[e.lb..=e.rb].iter().flatten().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textcore::{SuffixIndex, Text};

    #[test]
    fn path_graph_trie_matches_reversed_suffix_tree() {
        for s in [
            &b"a"[..],
            b"aaa",
            b"banana",
            b"CDABCCDABCCA",
            b"abracadabra",
        ] {
            let tree = LabeledTree::path_graph(&Text::from_bytes(s).unwrap());
            let trie = ReversedPathTrie::build(&tree);
            let rev: Vec<u8> = s.iter().rev().copied().collect();
            let idx = SuffixIndex::build(&Text::from_bytes(&rev).unwrap());
            assert_eq!(
                trie.edge_count(),
                idx.edge_count(),
                "{:?}",
                String::from_utf8_lossy(s)
            );
        }
    }

    #[test]
    fn star_with_repeated_labels() {
        let e = |c: u64, l: &str| (0u64, c, l.to_string());
        let tree = LabeledTree::new(0, &[e(1, "x"), e(2, "x"), e(3, "y")]).unwrap();
        let trie = ReversedPathTrie::build(&tree);
        assert_eq!(trie.edge_count(), 2);
        let occ: usize = trie
            .edges()
            .iter()
            .map(|e| trie.occurrences(e).count())
            .sum();
        assert_eq!(occ, 3);
    }
}
