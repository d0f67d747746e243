use std::collections::{BTreeMap, HashMap};

use super::padding::PaddedAttractor;
use super::parse::{parse_from_attractor, BidirectionalParse};
use crate::compressors::{Directive, RlGrammar, Rule, Symbol};
use crate::error::{Error, Result};
use crate::textcore::{SuffixIndex, Text};
use crate::util::ceil_log2;

/// New nonterminals spent on one directive of the underlying parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhraseCharge {
    pub start: usize,
    pub end: usize,
    /// Nonterminals created while copying the source's blocking.
    pub copy: usize,
    /// Nonterminals created while merging with neighbouring regions.
    pub merge: usize,
}

impl PhraseCharge {
    pub fn total(&self) -> usize {
        self.copy + self.merge
    }
}

/// Leveled rule: a level-`k` nonterminal has 2 or 3 children of level `k-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeveledRule {
    pub level: u32,
    pub children: Vec<Symbol>,
}

/// Straight-line program with leveled 2/3-ary rules.
///
/// `grammar()` gives the binary form: a 3-ary rule `X → ABC` becomes
/// `X → YC` and `Y → AB`.
#[derive(Debug, Clone)]
pub struct Slp {
    start: Symbol,
    rules: BTreeMap<u32, LeveledRule>,
    grammar: RlGrammar,
    charges: Vec<PhraseCharge>,
    max_gap: usize,
}

impl Slp {
    pub fn start(&self) -> Symbol {
        self.start
    }

    pub fn rules(&self) -> &BTreeMap<u32, LeveledRule> {
        &self.rules
    }

    pub fn grammar(&self) -> &RlGrammar {
        &self.grammar
    }

    /// Number of leveled nonterminals.
    pub fn nonterminals(&self) -> usize {
        self.rules.len()
    }

    /// Size of the binary grammar, one rule per distinct terminal included.
    pub fn size(&self) -> usize {
        self.grammar.size().total()
    }

    pub fn charges(&self) -> &[PhraseCharge] {
        &self.charges
    }

    pub fn max_charge(&self) -> usize {
        self.charges
            .iter()
            .map(PhraseCharge::total)
            .max()
            .unwrap_or(0)
    }

    /// `4(⌈log2 max_gap⌉ + 2)`, the per-phrase allowance.
    pub fn charge_bound(&self) -> usize {
        4 * (ceil_log2(self.max_gap.max(1)) as usize + 2)
    }

    pub fn expand(&self) -> Vec<u8> {
        self.grammar.expand()
    }

    pub fn to_json(&self) -> String {
        self.grammar.to_json()
    }
}

#[derive(Debug, Clone)]
struct Node {
    level: u32,
    len: usize,
    kids: Vec<usize>,
    byte: u8,
}

/// Arena of leveled nodes.
///
/// `refs` counts references from other nodes, `roots` counts regions rooted
/// at the node. A node nobody else can see is updated in place; anything
/// shared is copied before it changes.
struct Forest {
    nodes: Vec<Node>,
    refs: Vec<u32>,
    roots: Vec<u32>,
    terminals: HashMap<u8, usize>,
    created: usize,
}

impl Forest {
    fn new() -> Self {
        Forest {
            nodes: Vec::new(),
            refs: Vec::new(),
            roots: Vec::new(),
            terminals: HashMap::new(),
            created: 0,
        }
    }

    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.refs.push(0);
        self.roots.push(0);
        self.nodes.len() - 1
    }

    fn terminal(&mut self, byte: u8) -> usize {
        if let Some(&id) = self.terminals.get(&byte) {
            return id;
        }
        let id = self.push(Node {
            level: 0,
            len: 1,
            kids: Vec::new(),
            byte,
        });
        self.terminals.insert(byte, id);
        id
    }

    fn level(&self, v: usize) -> u32 {
        self.nodes[v].level
    }

    fn make(&mut self, kids: Vec<usize>) -> usize {
        debug_assert!((2..=3).contains(&kids.len()));
        let level = self.level(kids[0]) + 1;
        debug_assert!(kids.iter().all(|&k| self.level(k) + 1 == level));
        let len = kids.iter().map(|&k| self.nodes[k].len).sum();
        for &k in &kids {
            self.refs[k] += 1;
        }
        self.created += 1;
        self.push(Node {
            level,
            len,
            kids,
            byte: 0,
        })
    }

    fn set_kids(&mut self, v: usize, kids: Vec<usize>) {
        for &k in &self.nodes[v].kids {
            self.refs[k] -= 1;
        }
        for &k in &kids {
            self.refs[k] += 1;
        }
        self.nodes[v].len = kids.iter().map(|&k| self.nodes[k].len).sum();
        self.nodes[v].kids = kids;
    }

    /// Groups a sequence of at least two same-level nodes into blocks of 2 or 3.
    fn block(&mut self, seq: &[usize]) -> Vec<usize> {
        debug_assert!(seq.len() >= 2);
        block_sizes(seq.len())
            .scan(0, |at, size| {
                let s = *at;
                *at += size;
                Some(s..s + size)
            })
            .map(|r| self.make(seq[r].to_vec()))
            .collect()
    }

    fn block_to_one(&mut self, mut seq: Vec<usize>) -> usize {
        while seq.len() > 1 {
            seq = self.block(&seq);
        }
        seq[0]
    }

    /// A node expanding to offsets `a..=b` of `root`'s expansion, reusing the
    /// root's blocking wherever a block lies fully inside the range and
    /// creating new blocks only along the two borders.
    fn copy(&mut self, root: usize, a: usize, b: usize) -> usize {
        struct Entry {
            id: usize,
            start: usize,
            parent: usize,
        }
        let h = self.level(root) as usize;
        let mut runs: Vec<Vec<Entry>> = (0..=h).map(|_| Vec::new()).collect();
        runs[h].push(Entry {
            id: root,
            start: 0,
            parent: usize::MAX,
        });
        for k in (0..h).rev() {
            let (lower, upper) = runs.split_at_mut(k + 1);
            for (pi, e) in upper[0].iter().enumerate() {
                let mut off = e.start;
                for &kid in &self.nodes[e.id].kids {
                    let len = self.nodes[kid].len;
                    if off <= b && off + len > a {
                        lower[k].push(Entry {
                            id: kid,
                            start: off,
                            parent: pi,
                        });
                    }
                    off += len;
                }
            }
        }

        let mut left: Vec<usize> = Vec::new();
        let mut right: Vec<usize> = Vec::new();
        // reused nodes runs[k][p..=q], all fully inside the range
        let (mut p, mut q) = (0, runs[0].len() - 1);
        for k in 0..=h {
            let mid: Vec<usize> = runs[k][p..=q].iter().map(|e| e.id).collect();
            if left.len() + mid.len() + right.len() == 1 || k == h {
                let seq = [left, mid, right].concat();
                return self.block_to_one(seq);
            }
            let run = &runs[k][p..=q];
            let mut count: HashMap<usize, usize> = HashMap::new();
            for e in run {
                *count.entry(e.parent).or_default() += 1;
            }
            let full = |r: usize| count[&r] == self.nodes[runs[k + 1][r].id].kids.len();
            let (first, last) = (run[0].parent, run[run.len() - 1].parent);
            let mut lo = if full(first) { first } else { first + 1 };
            let mut hi = if full(last) {
                last as isize
            } else {
                last as isize - 1
            };
            let mut l_seq = left;
            let mut r_seq = Vec::new();
            for e in run {
                if !full(e.parent) {
                    if e.parent == first {
                        l_seq.push(e.id);
                    } else {
                        r_seq.push(e.id);
                    }
                }
            }
            r_seq.extend(right);
            if (lo as isize) <= hi && l_seq.len() == 1 {
                l_seq.extend(self.nodes[runs[k + 1][lo].id].kids.iter().copied());
                lo += 1;
            }
            if (lo as isize) <= hi && r_seq.len() == 1 {
                let stolen = self.nodes[runs[k + 1][hi as usize].id].kids.clone();
                r_seq.splice(0..0, stolen);
                hi -= 1;
            }
            if (lo as isize) > hi {
                let seq = [l_seq, r_seq].concat();
                return self.block_to_one(seq);
            }
            left = if l_seq.is_empty() {
                l_seq
            } else {
                self.block(&l_seq)
            };
            right = if r_seq.is_empty() {
                r_seq
            } else {
                self.block(&r_seq)
            };
            p = lo;
            q = hi as usize;
        }
        unreachable!("the root level always returns")
    }

    fn owned_path(&self, path: &[usize]) -> Vec<bool> {
        let mut owned = Vec::with_capacity(path.len());
        let mut ok = self.refs[path[0]] == 0 && self.roots[path[0]] == 0;
        owned.push(ok);
        for &v in &path[1..] {
            ok = ok && self.refs[v] == 1 && self.roots[v] == 0;
            owned.push(ok);
        }
        owned
    }

    /// Attaches `small` to one side of `big`, one level below its level on
    /// the corresponding spine, re-blocking upward as needed.
    fn attach(&mut self, big: usize, small: usize, at_end: bool) -> usize {
        let target = self.level(small) + 1;
        let mut path = vec![big];
        while self.level(*path.last().unwrap()) > target {
            let kids = &self.nodes[*path.last().unwrap()].kids;
            path.push(if at_end {
                *kids.last().unwrap()
            } else {
                kids[0]
            });
        }
        let owned = self.owned_path(&path);
        let mut carry = Some(small);
        let mut replace: Option<usize> = None;
        for t in (0..path.len()).rev() {
            let v = path[t];
            let mut kids = self.nodes[v].kids.clone();
            if let Some(r) = replace {
                if at_end {
                    *kids.last_mut().unwrap() = r;
                } else {
                    kids[0] = r;
                }
            }
            if let Some(c) = carry {
                if at_end {
                    kids.push(c);
                } else {
                    kids.insert(0, c);
                }
            }
            let extra = if kids.len() > 3 {
                // 4 children: the side away from the insertion stays in place
                if at_end {
                    Some(kids.split_off(2))
                } else {
                    let rest = kids.split_off(2);
                    Some(std::mem::replace(&mut kids, rest))
                }
            } else {
                None
            };
            replace = if owned[t] {
                self.set_kids(v, kids);
                None
            } else {
                Some(self.make(kids))
            };
            carry = extra.map(|e| self.make(e));
        }
        let top = replace.unwrap_or(big);
        match carry {
            Some(c) if at_end => self.make(vec![top, c]),
            Some(c) => self.make(vec![c, top]),
            None => top,
        }
    }

    fn merge(&mut self, left: usize, right: usize) -> usize {
        let (ll, rl) = (self.level(left), self.level(right));
        if ll == rl {
            self.make(vec![left, right])
        } else if ll > rl {
            self.attach(left, right, true)
        } else {
            self.attach(right, left, false)
        }
    }
}

/// Sizes 2, 2, ..., with a final 3 when the count is odd.
fn block_sizes(len: usize) -> impl Iterator<Item = usize> {
    let groups = len / 2;
    (0..groups).map(move |g| {
        if g + 1 == groups && len % 2 == 1 {
            3
        } else {
            2
        }
    })
}

/// Processed regions keyed by start: `(end, root)`, 1-based inclusive.
struct Regions {
    map: BTreeMap<usize, (usize, usize)>,
}

impl Regions {
    fn insert(&mut self, forest: &mut Forest, start: usize, end: usize, root: usize) {
        forest.roots[root] += 1;
        self.map.insert(start, (end, root));
    }

    fn remove(&mut self, forest: &mut Forest, start: usize) -> (usize, usize) {
        let (end, root) = self.map.remove(&start).expect("region exists");
        forest.roots[root] -= 1;
        (end, root)
    }

    fn containing(&self, pos: usize) -> Option<(usize, usize, usize)> {
        self.map
            .range(..=pos)
            .next_back()
            .filter(|(_, &(end, _))| end >= pos)
            .map(|(&s, &(e, r))| (s, e, r))
    }
}

/// SLP for `t` built from the parse of a padded attractor.
///
/// Length-1 phrases and explicit symbols are blocked into 2s and 3s
/// bottom-up. Longer phrases are then handled by increasing length (ties left
/// to right): each copies the blocking of its source, which lies in already
/// processed text, and the resulting nonterminal is merged with the processed
/// regions on either side so that every maximal processed region is always a
/// single nonterminal.
pub fn slp_from_attractor(t: &Text, idx: &SuffixIndex, pa: &PaddedAttractor) -> Result<Slp> {
    let parse = parse_from_attractor(t, idx, pa)?;
    slp_from_parse(t, &parse)
}

pub fn slp_from_parse(t: &Text, parse: &BidirectionalParse) -> Result<Slp> {
    let n = t.len();
    let mut forest = Forest::new();
    let mut regions = Regions {
        map: BTreeMap::new(),
    };

    let mut singles: Vec<usize> = Vec::new();
    // (start, end, src_start)
    let mut long: Vec<(usize, usize, usize)> = Vec::new();
    for d in parse.scheme().directives() {
        match *d {
            Directive::Assign { pos, .. } => singles.push(pos),
            Directive::Copy { dst, .. } if dst.0 == dst.1 => singles.push(dst.0),
            Directive::Copy { dst, src } => long.push((dst.0, dst.1, src.0)),
        }
    }
    singles.sort_unstable();
    let mut charge: BTreeMap<usize, PhraseCharge> = BTreeMap::new();
    for &p in &singles {
        charge.insert(
            p,
            PhraseCharge {
                start: p,
                end: p,
                copy: 0,
                merge: 0,
            },
        );
    }
    for &(s, e, _) in &long {
        charge.insert(
            s,
            PhraseCharge {
                start: s,
                end: e,
                copy: 0,
                merge: 0,
            },
        );
    }

    // maximal runs of length-1 items, each blocked to a single node; a block
    // is charged to the item where its second child starts
    let mut k = 0;
    while k < singles.len() {
        let mut end = k;
        while end + 1 < singles.len() && singles[end + 1] == singles[end] + 1 {
            end += 1;
        }
        let mut seq: Vec<(usize, usize)> = singles[k..=end]
            .iter()
            .map(|&p| (forest.terminal(t.byte_at(p)), p))
            .collect();
        while seq.len() > 1 {
            let mut next = Vec::with_capacity(seq.len() / 2);
            let mut at = 0;
            for size in block_sizes(seq.len()) {
                let kids: Vec<usize> = seq[at..at + size].iter().map(|x| x.0).collect();
                charge.get_mut(&seq[at + 1].1).expect("item").copy += 1;
                next.push((forest.make(kids), seq[at].1));
                at += size;
            }
            seq = next;
        }
        regions.insert(&mut forest, singles[k], singles[end], seq[0].0);
        k = end + 1;
    }

    long.sort_unstable_by_key(|&(s, e, _)| (e - s, s));
    for &(s, e, src) in &long {
        let len = e - s + 1;
        let (rs, re, root) = regions
            .containing(src)
            .ok_or_else(|| Error::Internal(format!("source of phrase [{s},{e}] is unprocessed")))?;
        if re < src + len - 1 {
            return Err(Error::Internal(format!(
                "source of phrase [{s},{e}] leaves its region"
            )));
        }
        let before = forest.created;
        let mut node = forest.copy(root, src - rs, src - rs + len - 1);
        let after_copy = forest.created;
        let (mut start, mut end) = (s, e);
        if let Some((ls, le, _)) = regions.containing(s - 1).filter(|_| s > 1) {
            debug_assert_eq!(le, s - 1);
            let (_, lroot) = regions.remove(&mut forest, ls);
            node = forest.merge(lroot, node);
            start = ls;
        }
        if e < n && regions.map.contains_key(&(e + 1)) {
            let (re2, rroot) = regions.remove(&mut forest, e + 1);
            node = forest.merge(node, rroot);
            end = re2;
        }
        regions.insert(&mut forest, start, end, node);
        let c = charge.get_mut(&s).expect("phrase");
        c.copy = after_copy - before;
        c.merge = forest.created - after_copy;
    }

    if regions.map.len() != 1 {
        return Err(Error::Internal(format!(
            "{} regions remain after processing",
            regions.map.len()
        )));
    }
    let (_, &(_, root)) = regions.map.iter().next().unwrap();
    let (start, rules, grammar) = export(&forest, root)?;
    Ok(Slp {
        start,
        rules,
        grammar,
        charges: charge.into_values().collect(),
        max_gap: parse.max_gap(),
    })
}

fn export(forest: &Forest, root: usize) -> Result<(Symbol, BTreeMap<u32, LeveledRule>, RlGrammar)> {
    let mut ids: HashMap<usize, u32> = HashMap::new();
    let mut leveled = BTreeMap::new();
    let mut binary = BTreeMap::new();
    let mut next_id = 0u32;
    let sym = |v: usize, ids: &HashMap<usize, u32>| {
        let node = &forest.nodes[v];
        if node.kids.is_empty() {
            Symbol::Terminal(node.byte)
        } else {
            Symbol::Rule(ids[&v])
        }
    };
    // iterative post-order over reachable nodes
    let mut stack = vec![(root, false)];
    while let Some((v, done)) = stack.pop() {
        let node = &forest.nodes[v];
        if node.kids.is_empty() || ids.contains_key(&v) {
            continue;
        }
        if !done {
            stack.push((v, true));
            stack.extend(node.kids.iter().map(|&k| (k, false)));
            continue;
        }
        let children: Vec<Symbol> = node.kids.iter().map(|&k| sym(k, &ids)).collect();
        let rule = match children[..] {
            [a, b] => Rule::Pair(a, b),
            [a, b, c] => {
                binary.insert(next_id, Rule::Pair(a, b));
                next_id += 1;
                Rule::Pair(Symbol::Rule(next_id - 1), c)
            }
            _ => return Err(Error::Internal("node with unexpected arity".into())),
        };
        binary.insert(next_id, rule);
        ids.insert(v, next_id);
        leveled.insert(
            next_id,
            LeveledRule {
                level: node.level,
                children,
            },
        );
        next_id += 1;
    }
    let start = sym(root, &ids);
    let grammar = RlGrammar::new(start, binary)?;
    Ok((start, leveled, grammar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compressors::{attractor_from_grammar, attractor_from_lz77, lz77_parse};
    use crate::derive::pad_attractor;
    use crate::textcore::{verify_attractor, AttractorSet, Provenance};

    fn build(s: &[u8], g: Option<&[usize]>) -> (Text, SuffixIndex, Slp) {
        let t = Text::from_bytes(s).unwrap();
        let idx = SuffixIndex::build(&t);
        let g = match g {
            Some(p) => AttractorSet::new(t.len(), p.iter().copied(), Provenance::User).unwrap(),
            None => attractor_from_lz77(&lz77_parse(&t, &idx)),
        };
        let pa = pad_attractor(&t, &idx, &g).unwrap();
        let slp = slp_from_attractor(&t, &idx, &pa).unwrap();
        (t, idx, slp)
    }

    fn check(t: &Text, slp: &Slp) {
        assert_eq!(slp.expand(), t.to_bytes());
        assert!(
            slp.max_charge() <= slp.charge_bound(),
            "{} > {}",
            slp.max_charge(),
            slp.charge_bound()
        );
        for r in slp.rules().values() {
            assert!((2..=3).contains(&r.children.len()));
            for c in &r.children {
                let child_level = match *c {
                    Symbol::Terminal(_) => 0,
                    Symbol::Rule(id) => slp.rules()[&id].level,
                };
                assert_eq!(child_level + 1, r.level);
            }
        }
    }

    #[test]
    fn block_sizes_cover() {
        for len in 2..20 {
            let sizes: Vec<usize> = block_sizes(len).collect();
            assert_eq!(sizes.iter().sum::<usize>(), len);
            assert!(sizes.iter().all(|&s| s == 2 || s == 3));
        }
    }

    #[test]
    fn two_symbols() {
        let (t, _, slp) = build(b"ab", Some(&[1, 2]));
        check(&t, &slp);
        assert_eq!(slp.grammar().rules().len(), 1);
    }

    #[test]
    fn single_symbol() {
        let (t, _, slp) = build(b"x", Some(&[1]));
        assert_eq!(slp.expand(), t.to_bytes());
        assert_eq!(slp.nonterminals(), 0);
    }

    #[test]
    fn unary_text() {
        let (t, _, slp) = build(b"aaaa", Some(&[1]));
        check(&t, &slp);
        let (t, _, slp) = build(&[b'a'; 300], Some(&[1]));
        check(&t, &slp);
    }

    #[test]
    fn example_round_trip() {
        let (t, idx, slp) = build(b"CDABCCDABCCA", Some(&[4, 7, 11, 12]));
        check(&t, &slp);
        let g = attractor_from_grammar(slp.grammar(), &t).unwrap();
        assert!(g.len() <= slp.size());
        assert!(verify_attractor(&t, &idx, &g).unwrap().valid);
    }

    #[test]
    fn fibonacci_and_mixed_texts() {
        let mut fib = vec![b"b".to_vec(), b"a".to_vec()];
        while fib.last().unwrap().len() < 1000 {
            let k = fib.len();
            let next = [fib[k - 1].clone(), fib[k - 2].clone()].concat();
            fib.push(next);
        }
        let samples: Vec<Vec<u8>> = vec![
            fib.last().unwrap().clone(),
            b"abracadabra abracadabra cadabra".to_vec(),
            (0..700u32)
                .map(|i| b"acgt"[((i * 7 + i / 13) % 4) as usize])
                .collect(),
        ];
        for s in samples {
            let (t, idx, slp) = build(&s, None);
            check(&t, &slp);
            let g = attractor_from_grammar(slp.grammar(), &t).unwrap();
            assert!(verify_attractor(&t, &idx, &g).unwrap().valid);
        }
    }
}
