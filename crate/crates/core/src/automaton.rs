//! Weighted automata over a runtime-selected weight domain.
//!
//! An automaton assigns every state an initial and a final weight and every
//! transition a weight from its [`WeightSemiring`]. Zero weights are never
//! stored: a state with zero initial weight is simply not initial, and a
//! zero-weight transition is absent. The weight of a path multiplies the
//! initial weight, the transition weights in order, and the final weight;
//! the weight of a word adds up the weights of all paths labeled with it.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::multiset::{Weight, WeightSemiring};
use crate::semiring::NumericSemiring;

pub type StateId = usize;
pub type SymbolId = usize;

/// A run through the automaton: a start state and a sequence of
/// (symbol, successor) steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: StateId,
    pub steps: Vec<(SymbolId, StateId)>,
}

impl Path {
    pub fn empty(start: StateId) -> Self {
        Path {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> StateId {
        self.steps.last().map(|(_, q)| *q).unwrap_or(self.start)
    }

    /// The word this path reads.
    pub fn label(&self) -> Vec<SymbolId> {
        self.steps.iter().map(|(a, _)| *a).collect()
    }

    /// The state sequence, including the start state.
    pub fn states(&self) -> Vec<StateId> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|(_, q)| *q))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAutomaton {
    semiring: WeightSemiring,
    symbols: Vec<String>,
    states: Vec<String>,
    initial: BTreeMap<StateId, Weight>,
    finals: BTreeMap<StateId, Weight>,
    transitions: BTreeMap<StateId, BTreeMap<SymbolId, BTreeMap<StateId, Weight>>>,
}

impl WeightedAutomaton {
    pub fn new(semiring: WeightSemiring) -> Self {
        WeightedAutomaton {
            semiring,
            symbols: Vec::new(),
            states: Vec::new(),
            initial: BTreeMap::new(),
            finals: BTreeMap::new(),
            transitions: BTreeMap::new(),
        }
    }

    pub fn semiring(&self) -> &WeightSemiring {
        &self.semiring
    }

    pub fn add_symbol(&mut self, name: impl Into<String>) -> Result<SymbolId> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidArgument(
                "symbol names must not be empty".to_string(),
            ));
        }
        if self.symbols.contains(&name) {
            return Err(Error::InvalidArgument(format!("duplicate symbol `{name}`")));
        }
        self.symbols.push(name);
        Ok(self.symbols.len() - 1)
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidArgument(
                "state names must not be empty".to_string(),
            ));
        }
        if self.states.contains(&name) {
            return Err(Error::InvalidArgument(format!("duplicate state `{name}`")));
        }
        self.states.push(name);
        Ok(self.states.len() - 1)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn symbol_name(&self, a: SymbolId) -> &str {
        &self.symbols[a]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.symbols
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn symbol_id(&self, name: &str) -> Result<SymbolId> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if q < self.states.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{q}")))
        }
    }

    /// Does this weight mean "absent"? In degenerate domains (0̄ = 1̄) the
    /// zero value doubles as the identity, so explicit writes are always
    /// kept there and absence is purely structural.
    fn treat_as_absent(&self, w: &Weight) -> bool {
        self.semiring.is_zero(w) && !self.semiring.degenerate()
    }

    /// Set the initial weight of a state. Setting it to the zero weight
    /// makes the state non-initial (except in degenerate domains, where the
    /// write marks the state with the identity weight).
    pub fn set_initial(&mut self, q: StateId, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.semiring.validate_weight(&w)?;
        if self.treat_as_absent(&w) {
            self.initial.remove(&q);
        } else {
            self.initial.insert(q, w);
        }
        Ok(())
    }

    pub fn set_final(&mut self, q: StateId, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.semiring.validate_weight(&w)?;
        if self.treat_as_absent(&w) {
            self.finals.remove(&q);
        } else {
            self.finals.insert(q, w);
        }
        Ok(())
    }

    /// Shorthand for the simplified notation: initial with weight one.
    pub fn mark_initial(&mut self, q: StateId) -> Result<()> {
        self.set_initial(q, self.semiring.one())
    }

    /// Shorthand for the simplified notation: accepting with weight one.
    pub fn mark_final(&mut self, q: StateId) -> Result<()> {
        self.set_final(q, self.semiring.one())
    }

    /// Add a transition. The (from, symbol, to) triple must be fresh; a
    /// zero weight means "no transition" and is dropped.
    pub fn add_transition(
        &mut self,
        from: StateId,
        symbol: SymbolId,
        to: StateId,
        w: Weight,
    ) -> Result<()> {
        self.check_state(from)?;
        self.check_state(to)?;
        if symbol >= self.symbols.len() {
            return Err(Error::UnknownSymbol(format!("#{symbol}")));
        }
        self.semiring.validate_weight(&w)?;
        if self.treat_as_absent(&w) {
            return Ok(());
        }
        let targets = self
            .transitions
            .entry(from)
            .or_default()
            .entry(symbol)
            .or_default();
        if targets.contains_key(&to) {
            return Err(Error::DuplicateTransition {
                from: self.states[from].clone(),
                symbol: self.symbols[symbol].clone(),
                to: self.states[to].clone(),
            });
        }
        targets.insert(to, w);
        Ok(())
    }

    /// The initial weight of a state, zero when the state is not initial.
    pub fn initial_weight(&self, q: StateId) -> Weight {
        self.initial
            .get(&q)
            .cloned()
            .unwrap_or_else(|| self.semiring.zero())
    }

    pub fn final_weight(&self, q: StateId) -> Weight {
        self.finals
            .get(&q)
            .cloned()
            .unwrap_or_else(|| self.semiring.zero())
    }

    pub fn initial_states(&self) -> impl Iterator<Item = (StateId, &Weight)> {
        self.initial.iter().map(|(q, w)| (*q, w))
    }

    pub fn final_states(&self) -> impl Iterator<Item = (StateId, &Weight)> {
        self.finals.iter().map(|(q, w)| (*q, w))
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains_key(&q)
    }

    /// Outgoing transitions of a state, ordered by symbol then target.
    pub fn transitions_from(
        &self,
        q: StateId,
    ) -> impl Iterator<Item = (SymbolId, StateId, &Weight)> {
        self.transitions
            .get(&q)
            .into_iter()
            .flat_map(|by_sym| {
                by_sym
                    .iter()
                    .flat_map(|(a, targets)| targets.iter().map(move |(to, w)| (*a, *to, w)))
            })
    }

    pub fn targets(&self, q: StateId, a: SymbolId) -> impl Iterator<Item = (StateId, &Weight)> {
        self.transitions
            .get(&q)
            .and_then(|by_sym| by_sym.get(&a))
            .into_iter()
            .flat_map(|targets| targets.iter().map(|(to, w)| (*to, w)))
    }

    pub fn transition_weight(&self, q: StateId, a: SymbolId, to: StateId) -> Option<&Weight> {
        self.transitions.get(&q)?.get(&a)?.get(&to)
    }

    /// Every transition of the automaton.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, SymbolId, StateId, &Weight)> {
        self.transitions.iter().flat_map(|(q, by_sym)| {
            by_sym.iter().flat_map(move |(a, targets)| {
                targets.iter().map(move |(to, w)| (*q, *a, *to, w))
            })
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions().count()
    }

    /// The weight of one path: initial weight, transition weights in order,
    /// final weight, all multiplied. Zero if the start is not initial or the
    /// end is not accepting.
    pub fn path_weight(&self, path: &Path) -> Result<Weight> {
        self.check_state(path.start)?;
        let mut w = self.initial_weight(path.start);
        let mut at = path.start;
        for (a, to) in &path.steps {
            let t = self.transition_weight(at, *a, *to).ok_or_else(|| {
                Error::InvalidPath(format!(
                    "no transition {} --{}--> {}",
                    self.states[at],
                    self.symbols.get(*a).map(|s| s.as_str()).unwrap_or("?"),
                    self.states.get(*to).map(|s| s.as_str()).unwrap_or("?"),
                ))
            })?;
            w = self.semiring.times(&w, t)?;
            at = *to;
        }
        self.semiring.times(&w, &self.final_weight(at))
    }

    /// All complete paths labeled with `word` that start in an initial
    /// state. Paths ending in non-accepting states are included; their
    /// weight is zero.
    pub fn paths_for_word(&self, word: &[SymbolId]) -> Result<Vec<Path>> {
        for &a in word {
            if a >= self.symbols.len() {
                return Err(Error::UnknownSymbol(format!("#{a}")));
            }
        }
        let mut paths = Vec::new();
        let mut stack: Vec<Path> = self.initial.keys().map(|q| Path::empty(*q)).collect();
        while let Some(path) = stack.pop() {
            if path.len() == word.len() {
                paths.push(path);
                continue;
            }
            let a = word[path.len()];
            for (to, _) in self.targets(path.end(), a) {
                let mut next = path.clone();
                next.steps.push((a, to));
                stack.push(next);
            }
        }
        Ok(paths)
    }

    /// The word's weight by literal path enumeration: the sum over all
    /// paths labeled with it, zero when there is none. Deliberately
    /// exponential in the word length; this is the reference every search
    /// result is checked against.
    pub fn word_weight_exhaustive(&self, word: &[SymbolId]) -> Result<Weight> {
        for &a in word {
            if a >= self.symbols.len() {
                return Err(Error::UnknownSymbol(format!("#{a}")));
            }
        }
        let mut total = self.semiring.zero();
        // Depth-first over (position, state, accumulated weight).
        let mut stack: Vec<(usize, StateId, Weight)> = self
            .initial
            .iter()
            .map(|(q, w)| (0usize, *q, w.clone()))
            .collect();
        while let Some((pos, at, acc)) = stack.pop() {
            if pos == word.len() {
                if let Some(f) = self.finals.get(&at) {
                    let w = self.semiring.times(&acc, f)?;
                    total = self.semiring.plus(&total, &w)?;
                }
                continue;
            }
            for (to, wt) in self.targets(at, word[pos]) {
                stack.push((pos + 1, to, self.semiring.times(&acc, wt)?));
            }
        }
        Ok(total)
    }

    /// Convenience wrapper taking symbol names.
    pub fn word_weight_by_names(&self, word: &[&str]) -> Result<Weight> {
        let ids = word
            .iter()
            .map(|n| self.symbol_id(n))
            .collect::<Result<Vec<_>>>()?;
        self.word_weight_exhaustive(&ids)
    }

    /// Is the word in the automaton's language, i.e. is its weight nonzero?
    pub fn accepts(&self, word: &[SymbolId]) -> Result<bool> {
        Ok(!self.semiring.is_zero(&self.word_weight_exhaustive(word)?))
    }

    /// At most one initial state and at most one successor per state and
    /// symbol.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1
            && self.transitions.values().all(|by_sym| {
                by_sym.values().all(|targets| targets.len() <= 1)
            })
    }

    /// States reachable from an initial state.
    pub fn accessible(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut queue: VecDeque<StateId> = self.initial.keys().copied().collect();
        for &q in self.initial.keys() {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for (_, to, _) in self.transitions_from(q) {
                if !seen[to] {
                    seen[to] = true;
                    queue.push_back(to);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn co_accessible(&self) -> Vec<bool> {
        let mut incoming: Vec<Vec<StateId>> = vec![Vec::new(); self.states.len()];
        for (q, _, to, _) in self.transitions() {
            incoming[to].push(q);
        }
        let mut seen = vec![false; self.states.len()];
        let mut queue: VecDeque<StateId> = self.finals.keys().copied().collect();
        for &q in self.finals.keys() {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &p in &incoming[q] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// The same structure under a different numeric semiring: sparse weight
    /// entries are kept, defaults follow the new semiring's identity.
    /// Composite automata cannot be reinterpreted this way.
    pub fn reinterpreted(&self, s: NumericSemiring) -> Result<WeightedAutomaton> {
        let new_semiring = match &self.semiring {
            WeightSemiring::Scalar(_) => WeightSemiring::Scalar(s),
            WeightSemiring::Multiset { features, .. } => WeightSemiring::Multiset {
                semiring: s,
                features: std::sync::Arc::clone(features),
            },
            WeightSemiring::Composite { .. } => {
                return Err(Error::UnsupportedOperation(
                    "cannot reinterpret a composite automaton".to_string(),
                ))
            }
        };
        let map_weight = |w: &Weight| -> Result<Weight> {
            Ok(match w {
                Weight::Scalar(v) => Weight::Scalar(*v),
                Weight::Multiset(m) => {
                    let mut out = crate::multiset::FeaturedMultiset::new(
                        std::sync::Arc::clone(m.alphabet()),
                        s.one(),
                    );
                    for (idx, v) in m.entries() {
                        out.set(idx, v);
                    }
                    Weight::Multiset(out)
                }
                Weight::Composite(_) => unreachable!(),
            })
        };
        let mut out = WeightedAutomaton::new(new_semiring);
        for name in &self.symbols {
            out.add_symbol(name.clone())?;
        }
        for name in &self.states {
            out.add_state(name.clone())?;
        }
        for (q, w) in &self.initial {
            out.set_initial(*q, map_weight(w)?)?;
        }
        for (q, w) in &self.finals {
            out.set_final(*q, map_weight(w)?)?;
        }
        for (q, a, to, w) in self.transitions() {
            out.add_transition(q, a, to, map_weight(w)?)?;
        }
        Ok(out)
    }

    /// A DOT digraph for visualisation: states become nodes, transitions
    /// become edges labeled `symbol / weight`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph wa {\n  rankdir=LR;\n");
        for (q, name) in self.states.iter().enumerate() {
            let mut attrs = String::new();
            if self.finals.contains_key(&q) {
                attrs.push_str(" shape=doublecircle");
            } else {
                attrs.push_str(" shape=circle");
            }
            let mut label = name.clone();
            if let Some(w) = self.initial.get(&q) {
                let _ = write!(label, "\\ni: {w}");
            }
            if let Some(w) = self.finals.get(&q) {
                let _ = write!(label, "\\nf: {w}");
            }
            let _ = writeln!(out, "  q{q} [label=\"{label}\"{attrs}];");
        }
        for (q, _) in self.initial.iter() {
            let _ = writeln!(out, "  start{q} [shape=point];");
            let _ = writeln!(out, "  start{q} -> q{q};");
        }
        for (q, a, to, w) in self.transitions() {
            let _ = writeln!(
                out,
                "  q{q} -> q{to} [label=\"{} / {w}\"];",
                self.symbols[a]
            );
        }
        out.push_str("}\n");
        out
    }
}
