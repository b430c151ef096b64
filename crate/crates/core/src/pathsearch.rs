//! Best-first, k-bounded path search with an explicitly specified
//! exploration order and a caller-supplied weight filter.
//!
//! The engine materializes at most `k` accepting paths. The frontier is a
//! priority queue over partial paths; the comparison key minimizes the
//! weight's staged features first (in the order's stage sequence), then the
//! remaining features in alphabet order, then path length, then discovery
//! order. Completions are queued like any other item, keyed by their
//! full weight including the final factor, so for semirings whose
//! multiplication never decreases a value (max-tropical, min-tropical,
//! max-max) recorded entries emerge in globally sorted order and growing
//! `k` only appends entries. For min-min, whose multiplication can shrink a
//! weight, entries are reported in discovery order instead.
//!
//! Termination relies on three guards: states that cannot reach an
//! accepting state are never enqueued; each (state, weight) pair is
//! expanded at most `k` times, which cuts identity-weight cycles (any
//! completion through a later occurrence has a same-ranked counterpart
//! through an earlier one); and a global expansion ceiling catches searches
//! whose filter keeps pruning recordings while weights keep growing.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::automaton::{Path, StateId, SymbolId, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::multiset::{Weight, WeightSemiring};
use crate::semiring::ExtendedCount;

/// The exploration order: features to minimize first, stage by stage. Ties
/// fall through to the remaining features in alphabet order, then shorter
/// paths, then discovery order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExplorationOrder {
    stages: Vec<String>,
}

impl ExplorationOrder {
    pub fn new<I, S>(stages: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let stages: Vec<String> = stages.into_iter().map(Into::into).collect();
        for (i, s) in stages.iter().enumerate() {
            if stages[..i].contains(s) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate exploration stage `{s}`"
                )));
            }
        }
        Ok(ExplorationOrder { stages })
    }

    pub fn stages(&self) -> &[String] {
        &self.stages
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathPhase {
    /// The path may still be extended; its weight lacks any final factor.
    Partial,
    /// The path ends in an accepting state; the weight includes the final
    /// factor.
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterDecision {
    Continue,
    /// Drop this path (and, for partial paths, everything extending it).
    /// Callers must only skip when no extension can change their verdict.
    SkipPath,
    /// Stop the whole search. A complete path triggering this is recorded
    /// first, so it is available as a witness.
    TerminateSearch,
}

/// What a [`WeightFilter`] gets to see.
#[derive(Debug)]
pub struct FilterContext<'a> {
    pub phase: PathPhase,
    pub weight: &'a Weight,
    pub len: usize,
}

pub type WeightFilter<'a> = dyn FnMut(&FilterContext) -> FilterDecision + 'a;

/// The identity filter.
pub fn explore_all(_: &FilterContext) -> FilterDecision {
    FilterDecision::Continue
}

/// The outcome of a bounded search: up to `k` accepting paths plus the
/// bookkeeping the analyses need to judge exactness.
#[derive(Debug, Clone)]
pub struct BoundedPathList {
    pub k: usize,
    pub entries: Vec<(Path, Weight)>,
    /// The frontier ran dry: every accepting path not pruned by the filter
    /// has been seen.
    pub exhausted: bool,
    /// The filter stopped the search.
    pub terminated: bool,
    /// The per-(state, weight) expansion budget dropped at least one path.
    pub budget_pruned: bool,
    /// The global expansion ceiling stopped the search.
    pub ceiling_hit: bool,
    /// Number of frontier expansions performed.
    pub expanded: usize,
}

/// How the comparison key reads a weight, resolved once per search.
enum KeyShape {
    Scalar,
    Multiset {
        stages: Vec<usize>,
        rest: Vec<usize>,
    },
    /// (component, feature-index-within-component) positions.
    Composite {
        stages: Vec<(usize, usize)>,
        rest: Vec<(usize, usize)>,
    },
}

impl KeyShape {
    fn resolve(order: &ExplorationOrder, semiring: &WeightSemiring) -> Result<KeyShape> {
        match semiring {
            WeightSemiring::Scalar(_) => {
                if let Some(s) = order.stages().first() {
                    return Err(Error::InvalidArgument(format!(
                        "exploration stage `{s}` on a scalar automaton"
                    )));
                }
                Ok(KeyShape::Scalar)
            }
            WeightSemiring::Multiset { features, .. } => {
                let stages = order
                    .stages()
                    .iter()
                    .map(|n| {
                        features
                            .index_of(n)
                            .ok_or_else(|| Error::UnknownFeature(n.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let rest = (0..features.len())
                    .filter(|i| !stages.contains(i))
                    .collect();
                Ok(KeyShape::Multiset { stages, rest })
            }
            WeightSemiring::Composite { components, features } => {
                let mut stages = Vec::new();
                for n in order.stages() {
                    if features.index_of(n).is_none() {
                        return Err(Error::UnknownFeature(n.clone()));
                    }
                    for (ci, c) in components.iter().enumerate() {
                        if let Some(fi) = c.features.index_of(n) {
                            stages.push((ci, fi));
                        }
                    }
                }
                let mut rest = Vec::new();
                for (ci, c) in components.iter().enumerate() {
                    for (fi, name) in c.features.names().iter().enumerate() {
                        if !order.stages().iter().any(|s| s == name) {
                            rest.push((ci, fi));
                        }
                    }
                }
                Ok(KeyShape::Composite { stages, rest })
            }
        }
    }

    fn key(&self, w: &Weight) -> Vec<ExtendedCount> {
        match (self, w) {
            (KeyShape::Scalar, Weight::Scalar(v)) => vec![*v],
            (KeyShape::Multiset { stages, rest }, Weight::Multiset(m)) => stages
                .iter()
                .chain(rest.iter())
                .map(|&i| m.get(i))
                .collect(),
            (KeyShape::Composite { stages, rest }, Weight::Composite(c)) => stages
                .iter()
                .chain(rest.iter())
                .map(|&(ci, fi)| c.components[ci].get(fi))
                .collect(),
            _ => unreachable!("weight shape was validated at insertion"),
        }
    }
}

struct Node {
    state: StateId,
    weight: Weight,
    parent: Option<(usize, SymbolId)>,
    len: usize,
}

/// A frontier item. Ordering: weight key, then length, with completions
/// ahead of equally ranked partials; the insertion sequence number breaks
/// the remaining ties, making the order total and the search fully
/// deterministic. Items deliberately do not carry their label sequence —
/// a deep chain of partials would otherwise cost quadratic time and
/// memory — so equally keyed paths surface in discovery order.
struct Item {
    key: Vec<ExtendedCount>,
    len: usize,
    is_partial: bool,
    seq: usize,
    node: usize,
    complete_weight: Option<Weight>,
}

impl Item {
    fn rank(&self) -> (&[ExtendedCount], usize, bool, usize) {
        (&self.key, self.len, self.is_partial, self.seq)
    }
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.rank() == other.rank()
    }
}

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse so the smallest rank pops first.
        other.rank().cmp(&self.rank())
    }
}

struct Search<'a> {
    automaton: &'a WeightedAutomaton,
    shape: KeyShape,
    co_accessible: Vec<bool>,
    nodes: Vec<Node>,
    heap: BinaryHeap<Item>,
    budget: HashMap<(StateId, Weight), usize>,
    seq: usize,
    result: BoundedPathList,
}

impl<'a> Search<'a> {
    fn path_of(&self, node: usize) -> Path {
        let mut steps = Vec::with_capacity(self.nodes[node].len);
        let mut at = node;
        while let Some((parent, sym)) = self.nodes[at].parent {
            steps.push((sym, self.nodes[at].state));
            at = parent;
        }
        steps.reverse();
        Path {
            start: self.nodes[at].state,
            steps,
        }
    }

    /// Returns false when the filter asked to terminate.
    fn offer_partial(
        &mut self,
        state: StateId,
        weight: Weight,
        parent: Option<(usize, SymbolId)>,
        filter: &mut WeightFilter,
    ) -> bool {
        if !self.co_accessible[state] {
            return true;
        }
        let len = parent.map(|(p, _)| self.nodes[p].len + 1).unwrap_or(0);
        match filter(&FilterContext {
            phase: PathPhase::Partial,
            weight: &weight,
            len,
        }) {
            FilterDecision::SkipPath => return true,
            FilterDecision::TerminateSearch => {
                self.result.terminated = true;
                return false;
            }
            FilterDecision::Continue => {}
        }
        let key = self.shape.key(&weight);
        let node = self.nodes.len();
        self.nodes.push(Node {
            state,
            weight,
            parent,
            len,
        });
        self.seq += 1;
        self.heap.push(Item {
            key,
            len,
            is_partial: true,
            seq: self.seq,
            node,
            complete_weight: None,
        });
        true
    }

    /// Queue the completion of the path at `node`, or record it right away
    /// when the filter terminates on it. Returns false to stop the search.
    fn offer_complete(&mut self, node: usize, filter: &mut WeightFilter) -> Result<bool> {
        let n = &self.nodes[node];
        let Some(final_weight) = self
            .automaton
            .final_states()
            .find(|(q, _)| *q == n.state)
            .map(|(_, w)| w)
        else {
            return Ok(true);
        };
        let weight = self.automaton.semiring().times(&n.weight, final_weight)?;
        match filter(&FilterContext {
            phase: PathPhase::Complete,
            weight: &weight,
            len: n.len,
        }) {
            FilterDecision::SkipPath => return Ok(true),
            FilterDecision::TerminateSearch => {
                let path = self.path_of(node);
                self.result.entries.push((path, weight));
                self.result.terminated = true;
                return Ok(false);
            }
            FilterDecision::Continue => {}
        }
        let key = self.shape.key(&weight);
        let len = n.len;
        self.seq += 1;
        self.heap.push(Item {
            key,
            len,
            is_partial: false,
            seq: self.seq,
            node,
            complete_weight: Some(weight),
        });
        Ok(true)
    }
}

/// Collect up to `k` accepting paths, best-first under `order`, pruned and
/// possibly cut short by `filter`.
pub fn k_bounded_search(
    a: &WeightedAutomaton,
    k: usize,
    order: &ExplorationOrder,
    filter: &mut WeightFilter,
) -> Result<BoundedPathList> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "the path bound k must be at least 1".to_string(),
        ));
    }
    let ceiling = k.saturating_mul(200).max(100_000);
    let mut search = Search {
        automaton: a,
        shape: KeyShape::resolve(order, a.semiring())?,
        co_accessible: a.co_accessible(),
        nodes: Vec::new(),
        heap: BinaryHeap::new(),
        budget: HashMap::new(),
        seq: 0,
        result: BoundedPathList {
            k,
            entries: Vec::new(),
            exhausted: false,
            terminated: false,
            budget_pruned: false,
            ceiling_hit: false,
            expanded: 0,
        },
    };

    let initial: Vec<(StateId, Weight)> = a
        .initial_states()
        .map(|(q, w)| (q, w.clone()))
        .collect();
    for (q, w) in initial {
        if !search.offer_partial(q, w, None, filter) {
            return Ok(search.result);
        }
    }

    while let Some(item) = search.heap.pop() {
        if let Some(weight) = item.complete_weight {
            search.result.entries.push((search.path_of(item.node), weight));
            if search.result.entries.len() >= k {
                return Ok(search.result);
            }
            continue;
        }

        search.result.expanded += 1;
        if search.result.expanded > ceiling {
            search.result.ceiling_hit = true;
            return Ok(search.result);
        }
        let node = item.node;
        let (state, weight) = {
            let n = &search.nodes[node];
            (n.state, n.weight.clone())
        };
        let used = search
            .budget
            .entry((state, weight.clone()))
            .and_modify(|c| *c += 1)
            .or_insert(1);
        if *used > k {
            search.result.budget_pruned = true;
            continue;
        }

        if !search.offer_complete(node, filter)? {
            return Ok(search.result);
        }

        let steps: Vec<(SymbolId, StateId, Weight)> = a
            .transitions_from(state)
            .map(|(sym, to, w)| (sym, to, w.clone()))
            .collect();
        for (sym, to, w) in steps {
            let next = a.semiring().times(&weight, &w)?;
            if !search.offer_partial(to, next, Some((node, sym)), filter) {
                return Ok(search.result);
            }
        }
    }

    search.result.exhausted = true;
    Ok(search.result)
}

/// Group a search result by label and aggregate each group with ⊕, in the
/// order the first path of each word was recorded.
pub fn aggregate_words(
    a: &WeightedAutomaton,
    list: &BoundedPathList,
) -> Result<Vec<(Vec<SymbolId>, Weight)>> {
    let mut order: Vec<Vec<SymbolId>> = Vec::new();
    let mut by_word: HashMap<Vec<SymbolId>, Weight> = HashMap::new();
    for (path, weight) in &list.entries {
        let word = path.label();
        match by_word.get_mut(&word) {
            None => {
                order.push(word.clone());
                by_word.insert(word, weight.clone());
            }
            Some(acc) => {
                *acc = a.semiring().plus(acc, weight)?;
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|w| {
            let agg = by_word[&w].clone();
            (w, agg)
        })
        .collect())
}

/// The words of up to `k` best paths with their aggregated weights.
pub fn accepted_words_stream(
    a: &WeightedAutomaton,
    k: usize,
    order: &ExplorationOrder,
    filter: &mut WeightFilter,
) -> Result<Vec<(Vec<SymbolId>, Weight)>> {
    let list = k_bounded_search(a, k, order, filter)?;
    aggregate_words(a, &list)
}
