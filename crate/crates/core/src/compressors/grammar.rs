use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{symbol_from_json, symbol_to_json};
use crate::error::{Error, Result};
use crate::textcore::{AttractorSet, Provenance, Text};

/// Longest expansion accepted before a grammar is rejected as too large.
pub const MAX_EXPANSION: usize = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Terminal(u8),
    Rule(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Pair(Symbol, Symbol),
    /// `Z^count`, `count >= 2`.
    Power(Symbol, usize),
}

impl Rule {
    fn children(&self) -> impl Iterator<Item = Symbol> {
        let (a, b) = match *self {
            Rule::Pair(a, b) => (a, Some(b)),
            Rule::Power(z, _) => (z, None),
        };
        std::iter::once(a).chain(b)
    }
}

/// Run-length context-free grammar with binary and power rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlGrammar {
    start: Symbol,
    rules: BTreeMap<u32, Rule>,
}

/// Size of a run-length grammar, counting one rule per distinct terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrammarSize {
    pub pairs: usize,
    pub powers: usize,
    pub terminals: usize,
}

impl GrammarSize {
    pub fn total(&self) -> usize {
        self.pairs + self.powers + self.terminals
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SymbolJson {
    Rule(u32),
    Terminal(String),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RuleJson {
    Pair(SymbolJson, SymbolJson),
    Power(SymbolJson, usize),
}

#[derive(Serialize, Deserialize)]
struct GrammarJson {
    start: SymbolJson,
    rules: BTreeMap<String, RuleJson>,
}

impl SymbolJson {
    fn from_symbol(s: Symbol) -> Self {
        match s {
            Symbol::Terminal(c) => SymbolJson::Terminal(symbol_to_json(c)),
            Symbol::Rule(id) => SymbolJson::Rule(id),
        }
    }

    fn into_symbol(self) -> Result<Symbol> {
        match self {
            SymbolJson::Rule(id) => Ok(Symbol::Rule(id)),
            SymbolJson::Terminal(s) => symbol_from_json(&s).map(Symbol::Terminal),
        }
    }
}

impl RlGrammar {
    /// Builds a grammar, rejecting undefined references, cycles, degenerate
    /// powers and oversized expansions. Unreachable rules are dropped.
    pub fn new(start: Symbol, rules: BTreeMap<u32, Rule>) -> Result<Self> {
        let mut g = RlGrammar { start, rules };
        g.validate()?;
        g.prune();
        Ok(g)
    }

    pub fn start(&self) -> Symbol {
        self.start
    }

    pub fn rules(&self) -> &BTreeMap<u32, Rule> {
        &self.rules
    }

    fn validate(&self) -> Result<()> {
        for (&id, rule) in &self.rules {
            if let Rule::Power(_, count) = *rule {
                if count < 2 {
                    return Err(Error::GrammarInvalid(format!(
                        "rule {id}: power {count} is below 2"
                    )));
                }
            }
            for c in rule.children() {
                if let Symbol::Rule(r) = c {
                    if !self.rules.contains_key(&r) {
                        return Err(Error::GrammarInvalid(format!(
                            "rule {id} refers to undefined rule {r}"
                        )));
                    }
                }
            }
        }
        if let Symbol::Rule(r) = self.start {
            if !self.rules.contains_key(&r) {
                return Err(Error::GrammarInvalid(format!(
                    "start refers to undefined rule {r}"
                )));
            }
        }
        self.topological_order()?;
        self.lengths()?;
        Ok(())
    }

    /// Rules ordered so that every rule comes after the rules it uses.
    fn topological_order(&self) -> Result<Vec<u32>> {
        // 0 = unseen, 1 = on stack, 2 = done
        let mut state: HashMap<u32, u8> = HashMap::new();
        let mut order = Vec::with_capacity(self.rules.len());
        for &root in self.rules.keys() {
            if state.contains_key(&root) {
                continue;
            }
            let mut stack = vec![(root, false)];
            while let Some((id, expanded)) = stack.pop() {
                if expanded {
                    state.insert(id, 2);
                    order.push(id);
                    continue;
                }
                match state.get(&id) {
                    Some(2) => continue,
                    Some(1) => {
                        return Err(Error::GrammarInvalid(format!(
                            "rule {id} is part of a cycle"
                        )))
                    }
                    _ => {}
                }
                state.insert(id, 1);
                stack.push((id, true));
                for c in self.rules[&id].children() {
                    if let Symbol::Rule(r) = c {
                        match state.get(&r) {
                            Some(1) => {
                                return Err(Error::GrammarInvalid(format!(
                                    "rule {r} is part of a cycle"
                                )))
                            }
                            Some(2) => {}
                            _ => stack.push((r, false)),
                        }
                    }
                }
            }
        }
        Ok(order)
    }

    fn lengths(&self) -> Result<HashMap<u32, usize>> {
        let mut len: HashMap<u32, usize> = HashMap::new();
        for id in self.topological_order()? {
            let of = |s: Symbol, len: &HashMap<u32, usize>| match s {
                Symbol::Terminal(_) => 1,
                Symbol::Rule(r) => len[&r],
            };
            let l = match self.rules[&id] {
                Rule::Pair(a, b) => of(a, &len).checked_add(of(b, &len)),
                Rule::Power(z, count) => of(z, &len).checked_mul(count),
            };
            match l {
                Some(l) if l <= MAX_EXPANSION => {
                    len.insert(id, l);
                }
                _ => {
                    return Err(Error::GrammarInvalid(format!(
                        "rule {id} expands beyond {MAX_EXPANSION} symbols"
                    )))
                }
            }
        }
        Ok(len)
    }

    fn reachable(&self) -> BTreeSet<u32> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<Symbol> = vec![self.start];
        while let Some(s) = stack.pop() {
            if let Symbol::Rule(id) = s {
                if seen.insert(id) {
                    stack.extend(self.rules[&id].children());
                }
            }
        }
        seen
    }

    fn prune(&mut self) {
        let keep = self.reachable();
        self.rules.retain(|id, _| keep.contains(id));
    }

    pub fn expansion_len(&self) -> usize {
        match self.start {
            Symbol::Terminal(_) => 1,
            Symbol::Rule(id) => self.lengths().expect("validated")[&id],
        }
    }

    pub fn expand(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.expansion_len());
        let mut stack = vec![self.start];
        while let Some(s) = stack.pop() {
            match s {
                Symbol::Terminal(c) => out.push(c),
                Symbol::Rule(id) => match self.rules[&id] {
                    Rule::Pair(a, b) => {
                        stack.push(b);
                        stack.push(a);
                    }
                    Rule::Power(z, count) => stack.extend(std::iter::repeat_n(z, count)),
                },
            }
        }
        out
    }

    pub fn size(&self) -> GrammarSize {
        let powers = self
            .rules
            .values()
            .filter(|r| matches!(r, Rule::Power(..)))
            .count();
        let mut terminals = BTreeSet::new();
        if let Symbol::Terminal(c) = self.start {
            terminals.insert(c);
        }
        for r in self.rules.values() {
            for c in r.children() {
                if let Symbol::Terminal(c) = c {
                    terminals.insert(c);
                }
            }
        }
        GrammarSize {
            pairs: self.rules.len() - powers,
            powers,
            terminals: terminals.len(),
        }
    }

    pub fn to_json(&self) -> String {
        let raw = GrammarJson {
            start: SymbolJson::from_symbol(self.start),
            rules: self
                .rules
                .iter()
                .map(|(id, r)| {
                    let rule = match *r {
                        Rule::Pair(a, b) => {
                            RuleJson::Pair(SymbolJson::from_symbol(a), SymbolJson::from_symbol(b))
                        }
                        Rule::Power(z, count) => RuleJson::Power(SymbolJson::from_symbol(z), count),
                    };
                    (id.to_string(), rule)
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("grammar serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: GrammarJson = serde_json::from_str(s)?;
        let mut rules = BTreeMap::new();
        for (key, r) in raw.rules {
            let id: u32 = key.parse().map_err(|_| {
                Error::Format(format!("rule id {key:?} is not a non-negative integer"))
            })?;
            let rule = match r {
                RuleJson::Pair(a, b) => Rule::Pair(a.into_symbol()?, b.into_symbol()?),
                RuleJson::Power(z, count) => Rule::Power(z.into_symbol()?, count),
            };
            rules.insert(id, rule);
        }
        RlGrammar::new(raw.start.into_symbol()?, rules)
    }
}

/// Attractor induced by a run-length grammar for `t`.
///
/// Walks the parse tree left to right and, at the first (leftmost) node of
/// each rule, marks the split position: the last character of `A` for
/// `X → AB`, of the first copy of `Z` for `X → Z^k`. Splits only catch
/// substrings of length at least two, so every symbol not already sitting
/// under a marked position gets its leftmost occurrence added.
pub fn attractor_from_grammar(g: &RlGrammar, t: &Text) -> Result<AttractorSet> {
    let bytes = t.to_bytes();
    if g.expand() != bytes {
        return Err(Error::GrammarInvalid(
            "grammar does not expand to the text".into(),
        ));
    }
    let len = g.lengths()?;
    let sym_len = |s: Symbol| match s {
        Symbol::Terminal(_) => 1,
        Symbol::Rule(r) => len[&r],
    };
    let mut seen = BTreeSet::new();
    let mut positions = Vec::new();
    // (symbol, 0-based offset)
    let mut stack = vec![(g.start, 0usize)];
    while let Some((s, off)) = stack.pop() {
        let Symbol::Rule(id) = s else { continue };
        if !seen.insert(id) {
            continue;
        }
        match g.rules[&id] {
            Rule::Pair(a, b) => {
                let split = off + sym_len(a);
                positions.push(split);
                stack.push((b, split));
                stack.push((a, off));
            }
            Rule::Power(z, _) => {
                positions.push(off + sym_len(z));
                stack.push((z, off));
            }
        }
    }
    let held: BTreeSet<u8> = positions.iter().map(|&p| bytes[p - 1]).collect();
    for &c in t.alphabet() {
        if !held.contains(&c) {
            let first = bytes
                .iter()
                .position(|&b| b == c)
                .expect("alphabet symbols occur");
            positions.push(first + 1);
        }
    }
    AttractorSet::new(t.len(), positions, Provenance::Grammar)
}
