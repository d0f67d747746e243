use serde::{Deserialize, Serialize};

use super::tree::LabeledTree;
use crate::error::{Error, Result};
use crate::util::ceil_log2;

/// Universe `{0, .., universe-1}` and a family of subsets whose union is the universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCoverInstance {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

/// Largest family handled by [`SetCoverInstance::min_cover_size`].
pub const SET_COVER_BRUTE_MAX: usize = 24;

impl SetCoverInstance {
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::EmptyUniverse);
        }
        let mut seen = vec![false; universe];
        let mut sets = sets;
        for (i, s) in sets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&x) = s.iter().find(|&&x| x >= universe) {
                return Err(Error::InvalidSetCover(format!(
                    "set {} holds {x}, outside the universe",
                    i + 1
                )));
            }
            s.iter().for_each(|&x| seen[x] = true);
        }
        if let Some(x) = seen.iter().position(|&b| !b) {
            return Err(Error::InvalidSetCover(format!("element {x} is in no set")));
        }
        Ok(SetCoverInstance { universe, sets })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Number of sets `t`.
    pub fn t(&self) -> usize {
        self.sets.len()
    }

    /// Grows the universe to the next power of two, covering the new elements
    /// with one extra set.
    pub fn padded(&self) -> SetCoverInstance {
        let target = 1usize << ceil_log2(self.universe);
        let mut sets = self.sets.clone();
        if target > self.universe {
            sets.push((self.universe..target).collect());
        }
        SetCoverInstance {
            universe: target,
            sets,
        }
    }

    /// Size of a smallest cover, by enumerating all subfamilies.
    pub fn min_cover_size(&self) -> Result<usize> {
        let t = self.t();
        if t > SET_COVER_BRUTE_MAX {
            return Err(Error::InputTooLarge {
                size: t,
                limit: SET_COVER_BRUTE_MAX,
            });
        }
        if self.universe > 128 {
            return Err(Error::InputTooLarge {
                size: self.universe,
                limit: 128,
            });
        }
        let masks: Vec<u128> = self
            .sets
            .iter()
            .map(|s| s.iter().fold(0u128, |m, &x| m | 1 << x))
            .collect();
        let full: u128 = if self.universe == 128 {
            u128::MAX
        } else {
            (1u128 << self.universe) - 1
        };
        let mut best = t;
        for pick in 0u32..(1u32 << t) {
            let size = pick.count_ones() as usize;
            if size >= best {
                continue;
            }
            let cover = (0..t)
                .filter(|&i| pick >> i & 1 == 1)
                .fold(0u128, |m, i| m | masks[i]);
            if cover & full == full {
                best = size;
            }
        }
        Ok(best)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SetCoverInstance = serde_json::from_str(s)?;
        SetCoverInstance::new(raw.universe, raw.sets)
    }
}

/// Hardness gadget: a tree whose smallest path attractor has size `t + 2q`,
/// `q` being the smallest cover of the padded instance.
///
/// The root has one child per set, entered by a label unique to that set.
/// Each of those has two children, entered by `0` and `1`, and both root the
/// same binary trie of the set's elements written with `m = log2 |U|` bits,
/// most significant first. Returns the tree and the padded set count `t`.
pub fn tree_from_setcover(sc: &SetCoverInstance) -> Result<(LabeledTree, usize)> {
    let sc = sc.padded();
    let m = ceil_log2(sc.universe) as usize;
    let mut edges: Vec<(u64, u64, String)> = Vec::new();
    let mut next_id = 1u64;
    let mut fresh = || {
        next_id += 1;
        next_id - 1
    };
    for (i, set) in sc.sets.iter().enumerate() {
        let branch = fresh();
        edges.push((0, branch, format!("s{}", i + 1)));
        for bit in ["0", "1"] {
            let top = fresh();
            edges.push((branch, top, bit.to_string()));
            // trie nodes keyed by the prefix read so far
            let mut nodes: std::collections::BTreeMap<(usize, usize), u64> = Default::default();
            for &x in set {
                let mut at = top;
                for d in 0..m {
                    let prefix = x >> (m - d - 1);
                    let key = (d + 1, prefix);
                    at = match nodes.get(&key) {
                        Some(&id) => id,
                        None => {
                            let id = fresh();
                            edges.push((at, id, (prefix & 1).to_string()));
                            nodes.insert(key, id);
                            id
                        }
                    };
                }
            }
        }
    }
    Ok((LabeledTree::new(0, &edges)?, sc.t()))
}
