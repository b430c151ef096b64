//! The decision problems over weighted automata: non-emptiness and
//! universality of a configuration against the accepted language, lower and
//! upper boundedness of the language itself, and syntactic projection of an
//! automaton onto a configuration.
//!
//! Words are judged on their aggregated (⊕) weight. For the catalogue
//! pairings this is equivalent to judging paths one at a time: with ⊕ = max
//! and lower-bound reading, a word's aggregate exceeds the configuration
//! exactly when some path does; with ⊕ = min and upper-bound reading, the
//! aggregate dips below exactly when some path does. The searches therefore
//! work per path and verify any candidate word with an exhaustive
//! evaluation before reporting it.
//!
//! Every verdict carries an `exact` flag. A verdict is exact when it cannot
//! change for any larger path bound: a verified witness, a fully drained
//! frontier, or a cycle argument. Verdicts derived from a truncated search
//! are reported with `exact = false` rather than guessed.

use std::collections::VecDeque;

use crate::automaton::{StateId, SymbolId, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::multiset::{satisfies, Weight, WeightSemiring};
use crate::pathsearch::{
    aggregate_words, k_bounded_search, ExplorationOrder, FilterContext, FilterDecision, PathPhase,
};
use crate::semiring::{BoundDirection, Fin, NumericSemiring};

/// The answer to a decision problem, with enough context to audit it.
#[derive(Debug, Clone)]
pub struct AnalysisVerdict {
    pub verdict: bool,
    /// A word (as symbol names) and its exact aggregated weight that proves
    /// the verdict, when one exists.
    pub witness: Option<(Vec<String>, Weight)>,
    pub explored_paths: usize,
    pub k_used: usize,
    /// True when the verdict is independent of the path bound.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundednessStrategy {
    /// Decide via pumpable cycles on the useful subgraph; exact, but only
    /// meaningful cycles are those in accumulating lower-bound components.
    ExactCycles,
    /// Decide from the cycles actually traversed by a k-bounded search;
    /// never claims exactness.
    Bounded,
}

fn word_names(a: &WeightedAutomaton, word: &[SymbolId]) -> Vec<String> {
    word.iter().map(|&s| a.symbol_name(s).to_string()).collect()
}

/// May this numeric semiring prune partial paths that violate a
/// configuration? Requires the violation to be permanent: multiplication
/// must move weights away from satisfaction, never towards it.
fn prunable(s: NumericSemiring) -> bool {
    match s.bound_direction() {
        // ⊗ is + or max over non-negative carriers: entries never shrink,
        // so exceeding a lower-bound configuration is permanent.
        BoundDirection::Lower => true,
        // ⊗ = min only shrinks entries, so falling below an upper-bound
        // configuration is permanent; ⊗ = + (min-tropical) still grows and
        // can repair a violation, so it must not prune.
        BoundDirection::Upper => !s.accumulates(),
        BoundDirection::None => false,
    }
}

/// Is `w`'s violation of `m` permanent under every extension of the path?
fn permanently_violates(semiring: &WeightSemiring, m: &Weight, w: &Weight) -> bool {
    let violated = |s: NumericSemiring, c: &Weight, w: &Weight| -> bool {
        if !prunable(s) {
            return false;
        }
        match (c, w) {
            (Weight::Multiset(c), Weight::Multiset(w)) => {
                !satisfies(c, w, s.bound_direction()).expect("config validated for this domain")
            }
            (Weight::Scalar(c), Weight::Scalar(w)) => match s.bound_direction() {
                BoundDirection::Lower => !(w <= c),
                BoundDirection::Upper => !(c <= w),
                BoundDirection::None => false,
            },
            _ => false,
        }
    };
    match (semiring, w) {
        (WeightSemiring::Scalar(s), Weight::Scalar(_)) => violated(*s, m, w),
        (WeightSemiring::Multiset { semiring, .. }, Weight::Multiset(_)) => {
            violated(*semiring, m, w)
        }
        (WeightSemiring::Composite { components, .. }, Weight::Composite(cw)) => {
            let Weight::Multiset(c) = m else {
                return false;
            };
            components.iter().zip(&cw.components).any(|(decl, part)| {
                prunable(decl.semiring)
                    && !satisfies(c, part, decl.semiring.bound_direction())
                        .expect("config validated for this domain")
            })
        }
        _ => false,
    }
}

/// Does some accepted word's weight get satisfied by `m`?
pub fn non_emptiness(
    a: &WeightedAutomaton,
    m: &Weight,
    k: usize,
    order: &ExplorationOrder,
) -> Result<AnalysisVerdict> {
    a.semiring().validate_config(m, true)?;
    let semiring = a.semiring().clone();
    let mut filter = |ctx: &FilterContext| {
        if ctx.phase == PathPhase::Partial && permanently_violates(&semiring, m, ctx.weight) {
            FilterDecision::SkipPath
        } else {
            FilterDecision::Continue
        }
    };
    let list = k_bounded_search(a, k, order, &mut filter)?;
    let explored = list.entries.len();
    // A word's true aggregate satisfying m implies its explored aggregate
    // does too (the aggregate over a subset of paths is closer to m), so
    // scanning explored aggregates finds every viable candidate; the
    // exhaustive re-evaluation then rules out the converse error.
    for (word, agg) in aggregate_words(a, &list)? {
        if a.semiring().is_zero(&agg) || !a.semiring().satisfies(m, &agg)? {
            continue;
        }
        let exact_weight = a.word_weight_exhaustive(&word)?;
        if !a.semiring().is_zero(&exact_weight) && a.semiring().satisfies(m, &exact_weight)? {
            return Ok(AnalysisVerdict {
                verdict: true,
                witness: Some((word_names(a, &word), exact_weight)),
                explored_paths: explored,
                k_used: k,
                exact: true,
            });
        }
    }
    // Pruned paths violate permanently, and one violating path already
    // spoils its word's aggregate, so pruning hides no satisfiable word;
    // only a truncated frontier does.
    Ok(AnalysisVerdict {
        verdict: false,
        witness: None,
        explored_paths: explored,
        k_used: k,
        exact: list.exhausted && !list.budget_pruned && !list.ceiling_hit,
    })
}

/// Does `m` satisfy every accepted word's weight?
pub fn universality(
    a: &WeightedAutomaton,
    m: &Weight,
    k: usize,
    order: &ExplorationOrder,
) -> Result<AnalysisVerdict> {
    a.semiring().validate_config(m, false)?;
    let semiring = a.semiring().clone();
    let mut filter = |ctx: &FilterContext| {
        if ctx.phase == PathPhase::Complete
            && !semiring
                .satisfies(m, ctx.weight)
                .expect("config validated for this domain")
        {
            FilterDecision::TerminateSearch
        } else {
            FilterDecision::Continue
        }
    };
    let list = k_bounded_search(a, k, order, &mut filter)?;
    let explored = list.entries.len();
    if list.terminated {
        // The terminating entry is the violating path; its word's aggregate
        // provably violates as well (the violating entry pushes the
        // aggregate past m in the violated component).
        let (path, _) = list.entries.last().expect("termination records a witness");
        let word = path.label();
        let exact_weight = a.word_weight_exhaustive(&word)?;
        return Ok(AnalysisVerdict {
            verdict: false,
            witness: Some((word_names(a, &word), exact_weight)),
            explored_paths: explored,
            k_used: k,
            exact: true,
        });
    }
    Ok(AnalysisVerdict {
        verdict: true,
        witness: None,
        explored_paths: explored,
        k_used: k,
        exact: list.exhausted && !list.budget_pruned && !list.ceiling_hit,
    })
}

/// Is there a configuration under which the accepted language is empty?
pub fn lower_boundedness(
    a: &WeightedAutomaton,
    k: usize,
    order: &ExplorationOrder,
) -> Result<AnalysisVerdict> {
    let upperish = a
        .semiring()
        .numeric_semirings()
        .iter()
        .any(|s| s.bound_direction() == BoundDirection::Upper);
    if !upperish {
        // Lower-bound satisfaction is monotone in the configuration, so the
        // empty configuration is the hardest to satisfy: some configuration
        // rejects everything iff the empty one does.
        let r = non_emptiness(a, &a.semiring().empty_config(), k, order)?;
        return Ok(AnalysisVerdict {
            verdict: !r.verdict,
            witness: r.witness,
            explored_paths: r.explored_paths,
            k_used: k,
            exact: r.exact,
        });
    }
    // Upper-bound components have no hardest configuration (bigger demands
    // are harder to meet), so fall back to the explored words: a
    // configuration demanding one more than any finite entry seen violates
    // every explored word that has a finite entry at all. Exact only when
    // the language itself is empty.
    let list = k_bounded_search(a, k, order, &mut crate::pathsearch::explore_all)?;
    let explored = list.entries.len();
    let words = aggregate_words(a, &list)?;
    let accepted: Vec<&Weight> = words
        .iter()
        .map(|(_, w)| w)
        .filter(|w| !a.semiring().is_zero(w))
        .collect();
    if accepted.is_empty() && list.exhausted && !list.budget_pruned && !list.ceiling_hit {
        return Ok(AnalysisVerdict {
            verdict: true,
            witness: None,
            explored_paths: explored,
            k_used: k,
            exact: true,
        });
    }
    let has_finite_entry = |w: &Weight| -> bool {
        match w {
            Weight::Scalar(v) => v.is_finite(),
            Weight::Multiset(ms) => ms.values().any(|v| v.is_finite()),
            Weight::Composite(cw) => cw
                .components
                .iter()
                .any(|ms| ms.values().any(|v| v.is_finite())),
        }
    };
    Ok(AnalysisVerdict {
        verdict: accepted.iter().all(|w| has_finite_entry(w)),
        witness: None,
        explored_paths: explored,
        k_used: k,
        exact: false,
    })
}

/// Components in which a positive cycle pumps weights without bound:
/// accumulating (⊗ = +) lower-bound components, i.e. max-tropical.
fn pumpable_components(s: &WeightSemiring) -> Vec<usize> {
    s.numeric_semirings()
        .iter()
        .enumerate()
        .filter(|(_, n)| n.accumulates() && n.bound_direction() == BoundDirection::Lower)
        .map(|(i, _)| i)
        .collect()
}

/// Does component `comp` of `w` contain an entry > 0?
fn component_positive(w: &Weight, comp: usize) -> bool {
    match w {
        Weight::Scalar(v) => *v > Fin(0),
        Weight::Multiset(m) => m.values().any(|v| v > Fin(0)),
        Weight::Composite(cw) => cw.components[comp].values().any(|v| v > Fin(0)),
    }
}

/// Reachability closure over an explicit edge list.
fn reachable(num_states: usize, edges: &[(StateId, StateId)], from: StateId) -> Vec<bool> {
    let mut seen = vec![false; num_states];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(q) = queue.pop_front() {
        for &(x, y) in edges {
            if x == q && !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Is some edge of `edges` that is positive in a pumpable component part of
/// a cycle within `edges`?
fn has_pumpable_cycle(
    a: &WeightedAutomaton,
    edges: &[(StateId, SymbolId, StateId, Weight)],
    pumpable: &[usize],
) -> bool {
    let graph: Vec<(StateId, StateId)> = edges.iter().map(|&(q, _, to, _)| (q, to)).collect();
    edges.iter().any(|(q, _, to, w)| {
        pumpable.iter().any(|&comp| component_positive(w, comp))
            && reachable(a.num_states(), &graph, *to)[*q]
    })
}

/// Is there a configuration `m` satisfying every accepted word?
pub fn upper_boundedness(
    a: &WeightedAutomaton,
    k: usize,
    order: &ExplorationOrder,
    strategy: BoundednessStrategy,
) -> Result<AnalysisVerdict> {
    let pumpable = pumpable_components(a.semiring());
    // Upper-bound components are satisfied by the all-zero configuration
    // and non-accumulating lower-bound components by the largest entry in
    // the automaton, so only accumulating lower-bound components can make
    // the answer negative — and they do exactly when a useful cycle keeps
    // adding instances.
    match strategy {
        BoundednessStrategy::ExactCycles => {
            let accessible = a.accessible();
            let co_accessible = a.co_accessible();
            let useful: Vec<(StateId, SymbolId, StateId, Weight)> = a
                .transitions()
                .filter(|(q, _, to, _)| {
                    accessible[*q] && co_accessible[*q] && accessible[*to] && co_accessible[*to]
                })
                .map(|(q, s, to, w)| (q, s, to, w.clone()))
                .collect();
            Ok(AnalysisVerdict {
                verdict: !has_pumpable_cycle(a, &useful, &pumpable),
                witness: None,
                explored_paths: 0,
                k_used: k,
                exact: true,
            })
        }
        BoundednessStrategy::Bounded => {
            let list = k_bounded_search(a, k, order, &mut crate::pathsearch::explore_all)?;
            let mut traversed: Vec<(StateId, SymbolId, StateId, Weight)> = Vec::new();
            for (path, _) in &list.entries {
                let mut at = path.start;
                for &(sym, to) in &path.steps {
                    let w = a
                        .transition_weight(at, sym, to)
                        .expect("recorded paths follow existing transitions")
                        .clone();
                    if !traversed.iter().any(|(q, s, t, _)| (*q, *s, *t) == (at, sym, to)) {
                        traversed.push((at, sym, to, w));
                    }
                    at = to;
                }
            }
            Ok(AnalysisVerdict {
                verdict: !has_pumpable_cycle(a, &traversed, &pumpable),
                witness: None,
                explored_paths: list.entries.len(),
                k_used: k,
                exact: false,
            })
        }
    }
}

/// Restrict `a` to the transitions whose weight `m` satisfies.
///
/// Only non-accumulating semirings support this: with ⊗ = min or max, a
/// path satisfies `m` exactly when each of its transitions does, so
/// dropping unsatisfied transitions preserves the satisfied language. With
/// ⊗ = + a transition's admissibility depends on the rest of the path.
pub fn project(a: &WeightedAutomaton, m: &Weight) -> Result<WeightedAutomaton> {
    if a.semiring()
        .numeric_semirings()
        .iter()
        .any(|s| s.accumulates())
    {
        return Err(Error::UnsupportedOperation(
            "projection needs a non-accumulating semiring (min/max multiplication); \
             additive weights cannot be filtered one transition at a time"
                .to_string(),
        ));
    }
    a.semiring().validate_config(m, false)?;
    let mut out = WeightedAutomaton::new(a.semiring().clone());
    for s in a.symbol_names() {
        out.add_symbol(s.clone())?;
    }
    for q in a.state_names() {
        out.add_state(q.clone())?;
    }
    for (q, w) in a.initial_states() {
        out.set_initial(q, w.clone())?;
    }
    for (q, w) in a.final_states() {
        out.set_final(q, w.clone())?;
    }
    for (q, sym, to, w) in a.transitions() {
        if a.semiring().satisfies(m, w)? {
            out.add_transition(q, sym, to, w.clone())?;
        }
    }
    Ok(out)
}
