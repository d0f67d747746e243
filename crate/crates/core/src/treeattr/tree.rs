use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textcore::Text;

/// Rooted tree with labeled edges.
///
/// Node `0` is the root after loading; edge `k` enters node `edge_child[k]`.
/// Labels are interned symbols compared by their interned id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    /// Original node ids, indexed by dense node index.
    node_ids: Vec<u64>,
    parent: Vec<Option<usize>>,
    /// Edge entering each node (`None` for the root).
    in_edge: Vec<Option<usize>>,
    edge_child: Vec<usize>,
    edge_label: Vec<u32>,
    labels: Vec<String>,
    depth: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    parent: u64,
    child: u64,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    root: u64,
    edges: Vec<EdgeJson>,
}

impl LabeledTree {
    /// Builds a tree from `(parent, child, label)` triples; edge ids follow input order.
    pub fn new(root: u64, edges: &[(u64, u64, String)]) -> Result<Self> {
        let mut index: HashMap<u64, usize> = HashMap::new();
        let mut node_ids = vec![root];
        index.insert(root, 0);
        let mut intern: HashMap<&str, u32> = HashMap::new();
        let mut labels = Vec::new();
        let mut edge_label = Vec::with_capacity(edges.len());
        for (p, c, l) in edges {
            for id in [*p, *c] {
                index.entry(id).or_insert_with(|| {
                    node_ids.push(id);
                    node_ids.len() - 1
                });
            }
            let next = labels.len() as u32;
            let lid = *intern.entry(l.as_str()).or_insert_with(|| {
                labels.push(l.clone());
                next
            });
            edge_label.push(lid);
        }
        let count = node_ids.len();
        let mut parent = vec![None; count];
        let mut in_edge = vec![None; count];
        let mut edge_child = Vec::with_capacity(edges.len());
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (k, (p, c, _)) in edges.iter().enumerate() {
            let (pi, ci) = (index[p], index[c]);
            if ci == 0 {
                return Err(Error::InvalidTree(format!(
                    "edge {} enters the root",
                    k + 1
                )));
            }
            if parent[ci].is_some() {
                return Err(Error::InvalidTree(format!("node {c} has two parents")));
            }
            parent[ci] = Some(pi);
            in_edge[ci] = Some(k);
            edge_child.push(ci);
            children[pi].push(ci);
        }
        let mut depth = vec![usize::MAX; count];
        depth[0] = 0;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        if let Some(v) = (0..count).find(|&v| depth[v] == usize::MAX) {
            return Err(Error::InvalidTree(format!(
                "node {} is not reachable from the root",
                node_ids[v]
            )));
        }
        Ok(LabeledTree {
            node_ids,
            parent,
            in_edge,
            edge_child,
            edge_label,
            labels,
            depth,
        })
    }

    /// Path graph of a text: edge `k` (0-based) carries `T[k+1]`.
    pub fn path_graph(t: &Text) -> Self {
        let edges: Vec<(u64, u64, String)> = t
            .to_bytes()
            .iter()
            .enumerate()
            .map(|(k, &b)| (k as u64, k as u64 + 1, char::from(b).to_string()))
            .collect();
        LabeledTree::new(0, &edges).expect("a path is a tree")
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    /// Number of edges `n`.
    pub fn edge_count(&self) -> usize {
        self.edge_child.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn in_edge(&self, v: usize) -> Option<usize> {
        self.in_edge[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn edge_child(&self, e: usize) -> usize {
        self.edge_child[e]
    }

    pub fn edge_parent(&self, e: usize) -> usize {
        self.parent[self.edge_child[e]].expect("edges have parents")
    }

    /// Interned label id of edge `e`.
    pub fn edge_label(&self, e: usize) -> u32 {
        self.edge_label[e]
    }

    pub fn label_text(&self, id: u32) -> &str {
        &self.labels[id as usize]
    }

    pub fn node_id(&self, v: usize) -> u64 {
        self.node_ids[v]
    }

    /// Label of the edge entering `v`.
    pub(crate) fn label_above(&self, v: usize) -> u32 {
        self.edge_label[self.in_edge[v].expect("non-root node")]
    }

    /// Labels read downward along the `len` edges ending at node `v`.
    pub fn path_labels(&self, v: usize, len: usize) -> Vec<String> {
        let mut out = Vec::with_capacity(len);
        let mut u = v;
        for _ in 0..len {
            out.push(self.labels[self.label_above(u) as usize].clone());
            u = self.parent[u].expect("path stays inside the tree");
        }
        out.reverse();
        out
    }

    pub fn to_json(&self) -> String {
        let raw = TreeJson {
            root: self.node_ids[0],
            edges: (0..self.edge_count())
                .map(|e| EdgeJson {
                    parent: self.node_ids[self.edge_parent(e)],
                    child: self.node_ids[self.edge_child[e]],
                    label: self.labels[self.edge_label[e] as usize].clone(),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("tree serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: TreeJson = serde_json::from_str(s)?;
        let edges: Vec<(u64, u64, String)> = raw
            .edges
            .into_iter()
            .map(|e| (e.parent, e.child, e.label))
            .collect();
        LabeledTree::new(raw.root, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: u64, c: u64, l: &str) -> (u64, u64, String) {
        (p, c, l.to_string())
    }

    #[test]
    fn builds_and_roundtrips() {
        let t = LabeledTree::new(10, &[e(10, 11, "a"), e(10, 12, "b"), e(12, 13, "a")]).unwrap();
        assert_eq!(t.edge_count(), 3);
        assert_eq!(t.node_count(), 4);
        assert_eq!(t.depth(3), 2);
        assert_eq!(t.path_labels(3, 2), vec!["b", "a"]);
        let json = t.to_json();
        assert_eq!(LabeledTree::from_json(&json).unwrap(), t);
    }

    #[test]
    fn rejects_malformed() {
        assert!(LabeledTree::new(0, &[e(0, 1, "a"), e(2, 1, "b")]).is_err());
        assert!(LabeledTree::new(0, &[e(1, 0, "a")]).is_err());
        assert!(LabeledTree::new(0, &[e(0, 1, "a"), e(2, 3, "b")]).is_err());
        assert!(LabeledTree::new(0, &[e(1, 2, "a"), e(2, 1, "b")]).is_err());
        assert!(LabeledTree::from_json("{\"root\":0}").is_err());
    }

    #[test]
    fn path_graph_of_text() {
        let t = LabeledTree::path_graph(&Text::from_bytes(b"abc").unwrap());
        assert_eq!(t.edge_count(), 3);
        assert_eq!(t.path_labels(3, 3), vec!["a", "b", "c"]);
    }
}
