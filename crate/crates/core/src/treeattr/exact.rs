//! Exact minimum set cover by branch and bound, with a lexicographically
//! smallest answer among the optimal ones.

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn minus(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }

    fn overlap(&self, o: &Bits) -> usize {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

pub(crate) struct ExactCover {
    /// Covering sets per kept element, ascending.
    elem_sets: Vec<Vec<usize>>,
    set_elems: Vec<Bits>,
    elems: usize,
}

impl ExactCover {
    /// `elem_sets[e]` lists the sets containing element `e`; every element
    /// needs at least one.
    pub(crate) fn new(sets: usize, elem_sets: &[Vec<usize>]) -> Self {
        let mut by_elem: Vec<Vec<usize>> = elem_sets
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        // an element whose sets include all sets of another one is covered
        // whenever the other is, so it can be dropped
        by_elem.sort();
        by_elem.dedup();
        by_elem.sort_by_key(|s| s.len());
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for s in by_elem {
            let dominated = kept
                .iter()
                .any(|k| k.iter().all(|x| s.binary_search(x).is_ok()));
            if !dominated {
                kept.push(s);
            }
        }
        let elems = kept.len();
        let mut set_elems = vec![Bits::empty(elems); sets];
        for (e, s) in kept.iter().enumerate() {
            for &x in s {
                set_elems[x].set(e);
            }
        }
        ExactCover {
            elem_sets: kept,
            set_elems,
            elems,
        }
    }

    fn all(&self) -> Bits {
        let mut b = Bits::empty(self.elems);
        (0..self.elems).for_each(|e| b.set(e));
        b
    }

    fn allowed(&self, e: usize, min_id: usize) -> &[usize] {
        let s = &self.elem_sets[e];
        &s[s.partition_point(|&x| x < min_id)..]
    }

    fn lower_bound(&self, uncovered: &Bits, min_id: usize) -> usize {
        // elements whose allowed sets are pairwise disjoint need one set each
        let mut used = vec![false; self.set_elems.len()];
        let mut packing = 0;
        for e in uncovered.ones() {
            let sets = self.allowed(e, min_id);
            if sets.iter().all(|&s| !used[s]) {
                packing += 1;
                sets.iter().for_each(|&s| used[s] = true);
            }
        }
        let best = self.set_elems[min_id.min(self.set_elems.len())..]
            .iter()
            .map(|s| s.overlap(uncovered))
            .max()
            .unwrap_or(0);
        let by_size = if best == 0 {
            usize::MAX
        } else {
            uncovered.count().div_ceil(best)
        };
        packing.max(by_size)
    }

    /// Can `uncovered` be covered by at most `budget` sets with ids `>= min_id`?
    fn feasible(&self, uncovered: &Bits, budget: usize, min_id: usize) -> bool {
        if uncovered.is_empty() {
            return true;
        }
        if budget == 0 || self.lower_bound(uncovered, min_id) > budget {
            return false;
        }
        let pivot = uncovered
            .ones()
            .min_by_key(|&e| self.allowed(e, min_id).len())
            .expect("nonempty");
        self.allowed(pivot, min_id)
            .iter()
            .any(|&s| self.feasible(&uncovered.minus(&self.set_elems[s]), budget - 1, min_id))
    }

    /// Minimum cover, lexicographically smallest by set id among the minimum ones.
    pub(crate) fn solve(&self) -> Vec<usize> {
        let all = self.all();
        let mut k = self.lower_bound(&all, 0).min(self.set_elems.len());
        while !self.feasible(&all, k, 0) {
            k += 1;
        }
        let mut chosen = Vec::with_capacity(k);
        let mut uncovered = all;
        let mut next = 0;
        while !uncovered.is_empty() {
            let budget = k - chosen.len() - 1;
            let c = (next..self.set_elems.len())
                .find(|&c| {
                    self.set_elems[c].overlap(&uncovered) > 0
                        && self.feasible(&uncovered.minus(&self.set_elems[c]), budget, c + 1)
                })
                .expect("a minimum cover exists");
            uncovered = uncovered.minus(&self.set_elems[c]);
            chosen.push(c);
            next = c + 1;
        }
        chosen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textcore::next_combination;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exhaustive(sets: usize, elem_sets: &[Vec<usize>]) -> Vec<usize> {
        for k in 1..=sets {
            let mut c: Vec<usize> = (0..k).collect();
            loop {
                if elem_sets.iter().all(|s| s.iter().any(|x| c.contains(x))) {
                    return c;
                }
                if !next_combination(&mut c, sets) {
                    break;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let sets = rng.gen_range(1..=9);
            let elems = rng.gen_range(1..=12);
            let elem_sets: Vec<Vec<usize>> = (0..elems)
                .map(|_| {
                    let mut s: Vec<usize> = (0..sets).filter(|_| rng.gen_bool(0.3)).collect();
                    if s.is_empty() {
                        s.push(rng.gen_range(0..sets));
                    }
                    s
                })
                .collect();
            assert_eq!(
                ExactCover::new(sets, &elem_sets).solve(),
                exhaustive(sets, &elem_sets)
            );
        }
    }
}
