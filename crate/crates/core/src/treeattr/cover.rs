use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::exact::ExactCover;
use super::tree::LabeledTree;
use super::trie::ReversedPathTrie;
use crate::error::{Error, Result};
use crate::textcore::{AttractorSet, Provenance, Text};

/// Set of tree edges, by 0-based edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathAttractor {
    edges: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRef {
    id: usize,
    parent: u64,
    child: u64,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct PathAttractorJson {
    k: usize,
    edges: Vec<EdgeRef>,
}

impl PathAttractor {
    pub fn new(tree: &LabeledTree, edges: impl IntoIterator<Item = usize>) -> Result<Self> {
        let edges: BTreeSet<usize> = edges.into_iter().collect();
        if let Some(&e) = edges.iter().find(|&&e| e >= tree.edge_count()) {
            return Err(Error::EdgeNotInTree(e + 1));
        }
        Ok(PathAttractor {
            edges: edges.into_iter().collect(),
        })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// Cardinality `k`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// JSON with 1-based edge ids (input order) and the edge endpoints.
    pub fn to_json(&self, tree: &LabeledTree) -> String {
        let raw = PathAttractorJson {
            k: self.len(),
            edges: self
                .edges
                .iter()
                .map(|&e| EdgeRef {
                    id: e + 1,
                    parent: tree.node_id(tree.edge_parent(e)),
                    child: tree.node_id(tree.edge_child(e)),
                    label: tree.label_text(tree.edge_label(e)).to_string(),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("attractor serialization cannot fail")
    }

    /// Reads the `id` fields (1-based) back.
    pub fn from_json(tree: &LabeledTree, s: &str) -> Result<Self> {
        let raw: PathAttractorJson = serde_json::from_str(s)?;
        let ids = raw
            .edges
            .iter()
            .map(|e| e.id.checked_sub(1).ok_or(Error::EdgeNotInTree(0)))
            .collect::<Result<Vec<_>>>()?;
        PathAttractor::new(tree, ids)
    }
}

/// A downward path label with no occurrence crossing the tested edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness {
    /// Dense index of the node where the reported occurrence ends.
    pub end_node: usize,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathVerification {
    pub valid: bool,
    pub witness: Option<PathWitness>,
}

/// Nodes ordered by decreasing depth, so children come before parents.
fn bottom_up(tree: &LabeledTree) -> Vec<usize> {
    let mut order: Vec<usize> = (0..tree.node_count()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(tree.depth(v)));
    order
}

/// Checks that every downward path label has an occurrence using an edge of `a`.
///
/// As for strings, one label per trie edge is enough: the one read through
/// the edge's first symbol. Longer labels ending on the same edge occur at
/// the same end nodes and only reach further up.
pub fn verify_path_attractor(tree: &LabeledTree, a: &PathAttractor) -> Result<PathVerification> {
    if let Some(&e) = a.edges.iter().find(|&&e| e >= tree.edge_count()) {
        return Err(Error::EdgeNotInTree(e + 1));
    }
    let trie = ReversedPathTrie::build(tree);
    let chosen: BTreeSet<usize> = a.edges.iter().copied().collect();
    // up[v]: edges walked upward from v before reaching a chosen one, minus one
    let mut up = vec![usize::MAX; tree.node_count()];
    let mut order = bottom_up(tree);
    order.reverse();
    for v in order {
        let Some(e) = tree.in_edge(v) else { continue };
        up[v] = if chosen.contains(&e) {
            0
        } else {
            let p = tree.parent(v).expect("non-root");
            up[p].saturating_add(1)
        };
    }
    for e in trie.edges() {
        if !trie.occurrences(e).any(|v| up[v] < e.st_len()) {
            let end_node = trie
                .occurrences(e)
                .min()
                .expect("trie edges have occurrences");
            return Ok(PathVerification {
                valid: false,
                witness: Some(PathWitness {
                    end_node,
                    labels: tree.path_labels(end_node, e.st_len()),
                }),
            });
        }
    }
    Ok(PathVerification {
        valid: true,
        witness: None,
    })
}

/// Bipartite incidence between tree edges and trie edges: tree edge `f`
/// covers trie edge `e'` when some occurrence of `e'`'s string uses `f`.
#[derive(Debug, Clone)]
pub struct CoverGraph {
    by_tree_edge: Vec<Vec<u32>>,
    by_trie_edge: Vec<Vec<u32>>,
}

impl CoverGraph {
    pub fn build(tree: &LabeledTree, trie: &ReversedPathTrie) -> Self {
        let order = bottom_up(tree);
        let mut by_tree_edge: Vec<Vec<u32>> = vec![Vec::new(); tree.edge_count()];
        let mut by_trie_edge: Vec<Vec<u32>> = Vec::with_capacity(trie.edge_count());
        // rem[v]: how many more edges upward from v an occurrence still spans
        let mut rem = vec![0usize; tree.node_count()];
        for (k, e) in trie.edges().iter().enumerate() {
            rem.iter_mut().for_each(|r| *r = 0);
            for v in trie.occurrences(e) {
                rem[v] = e.st_len();
            }
            let mut covered = Vec::new();
            for &v in &order {
                if rem[v] == 0 {
                    continue;
                }
                let f = tree.in_edge(v).expect("occurrences end below the root");
                covered.push(f as u32);
                by_tree_edge[f].push(k as u32);
                let p = tree.parent(v).expect("non-root");
                rem[p] = rem[p].max(rem[v] - 1);
            }
            covered.sort_unstable();
            by_trie_edge.push(covered);
        }
        CoverGraph {
            by_tree_edge,
            by_trie_edge,
        }
    }

    /// Trie edges covered by tree edge `f`.
    pub fn covered_by(&self, f: usize) -> &[u32] {
        &self.by_tree_edge[f]
    }

    /// Tree edges covering trie edge `e`.
    pub fn covering(&self, e: usize) -> &[u32] {
        &self.by_trie_edge[e]
    }

    pub fn degree(&self, f: usize) -> usize {
        self.by_tree_edge[f].len()
    }

    pub fn tree_edges(&self) -> usize {
        self.by_tree_edge.len()
    }

    pub fn trie_edges(&self) -> usize {
        self.by_trie_edge.len()
    }
}

/// Greedy set cover over the cover graph: repeatedly take the tree edge
/// covering the most still-uncovered trie edges, smallest id on ties.
pub fn greedy_path_attractor(tree: &LabeledTree) -> PathAttractor {
    let trie = ReversedPathTrie::build(tree);
    let graph = CoverGraph::build(tree, &trie);
    let mut degree: Vec<usize> = (0..graph.tree_edges()).map(|f| graph.degree(f)).collect();
    let mut covered = vec![false; graph.trie_edges()];
    let mut left = graph.trie_edges();
    let mut chosen = Vec::new();
    while left > 0 {
        let (best, _) = degree
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("uncovered trie edges imply tree edges");
        chosen.push(best);
        for &e in graph.covered_by(best) {
            let e = e as usize;
            if covered[e] {
                continue;
            }
            covered[e] = true;
            left -= 1;
            for &f in graph.covering(e) {
                degree[f as usize] -= 1;
            }
        }
    }
    PathAttractor::new(tree, chosen).expect("chosen edges belong to the tree")
}

/// Greedy attractor of a text through its path graph; edge `k` is position `k + 1`.
pub fn greedy_string_attractor(t: &Text) -> AttractorSet {
    let tree = LabeledTree::path_graph(t);
    let a = greedy_path_attractor(&tree);
    AttractorSet::new(
        t.len(),
        a.edges().iter().map(|&e| e + 1),
        Provenance::Greedy,
    )
    .expect("edges map to text positions")
}

/// Smallest path attractor, lexicographically first by edge id among the smallest.
///
/// Solved as an exact set cover over the cover graph, by branch and bound.
pub fn bruteforce_path_attractor(tree: &LabeledTree, limit: usize) -> Result<PathAttractor> {
    if tree.edge_count() > limit {
        return Err(Error::InputTooLarge {
            size: tree.edge_count(),
            limit,
        });
    }
    let trie = ReversedPathTrie::build(tree);
    let graph = CoverGraph::build(tree, &trie);
    let elem_sets: Vec<Vec<usize>> = (0..graph.trie_edges())
        .map(|e| graph.covering(e).iter().map(|&f| f as usize).collect())
        .collect();
    let chosen = ExactCover::new(graph.tree_edges(), &elem_sets).solve();
    PathAttractor::new(tree, chosen)
}

/// `max(1, ⌈ln N⌉)`, the approximation factor checked against exact optima.
pub fn greedy_factor(trie_edges: usize) -> usize {
    ((trie_edges.max(1) as f64).ln().ceil() as usize).max(1)
}
