//! Small shared helpers.

/// Range-minimum sparse table over a static array, O(1) queries.
#[derive(Debug, Clone)]
pub struct SparseTable {
    levels: Vec<Vec<usize>>,
}

impl SparseTable {
    pub fn new(values: &[usize]) -> Self {
        let mut levels = vec![values.to_vec()];
        let mut width = 1;
        while 2 * width <= values.len() {
            let prev = levels.last().unwrap();
            let next: Vec<usize> = (0..=values.len() - 2 * width)
                .map(|i| prev[i].min(prev[i + width]))
                .collect();
            levels.push(next);
            width *= 2;
        }
        SparseTable { levels }
    }

    /// Minimum of `values[lo..=hi]`.
    pub fn min(&self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        let k = usize::BITS - 1 - (hi - lo + 1).leading_zeros();
        let row = &self.levels[k as usize];
        row[lo].min(row[hi + 1 - (1 << k)])
    }
}

/// `⌈log2 x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: usize) -> u32 {
    debug_assert!(x >= 1);
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// Edge of the compacted trie over a sorted list of strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalEdge {
    pub parent_depth: usize,
    pub depth: usize,
    pub lb: usize,
    pub rb: usize,
}

/// Edges of the compacted trie of sorted distinct strings, given their
/// lengths and adjacent LCPs (`lcp[0] == 0`).
///
/// Every string is read as ending in a unique terminator below all symbols;
/// edges labeled by the terminator alone are dropped. Internal nodes come
/// from lcp-intervals, leaves from single rows. Sorted by `(lb, parent_depth)`.
pub fn lcp_interval_edges(lcp: &[usize], lens: &[usize]) -> Vec<IntervalEdge> {
    let rows = lens.len();
    let lcp_at = |q: usize| if q < rows { lcp[q] } else { 0 };
    let mut edges = Vec::new();

    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    for q in 1..=rows {
        let cur = lcp_at(q);
        let mut lb = q - 1;
        while cur < stack.last().unwrap().0 {
            let (depth, b) = stack.pop().unwrap();
            let rb = q - 1;
            edges.push(IntervalEdge {
                parent_depth: lcp_at(b).max(lcp_at(rb + 1)),
                depth,
                lb: b,
                rb,
            });
            lb = b;
        }
        if cur > stack.last().unwrap().0 {
            stack.push((cur, lb));
        }
    }

    for (q, &len) in lens.iter().enumerate() {
        let parent_depth = lcp_at(q).max(lcp_at(q + 1));
        if len > parent_depth {
            edges.push(IntervalEdge {
                parent_depth,
                depth: len,
                lb: q,
                rb: q,
            });
        }
    }
    edges.sort_unstable_by_key(|e| (e.lb, e.parent_depth));
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_table_matches_scan() {
        let v = [5, 3, 8, 1, 9, 2, 7, 7, 0, 4];
        let st = SparseTable::new(&v);
        for lo in 0..v.len() {
            for hi in lo..v.len() {
                assert_eq!(st.min(lo, hi), *v[lo..=hi].iter().min().unwrap());
            }
        }
    }

    #[test]
    fn ceil_log2_values() {
        let expect = [
            (1, 0),
            (2, 1),
            (3, 2),
            (4, 2),
            (5, 3),
            (8, 3),
            (9, 4),
            (1024, 10),
        ];
        for (x, e) in expect {
            assert_eq!(ceil_log2(x), e, "x = {x}");
        }
    }
}
