//! Reference verdicts for the benchmark, computed without the best-first
//! search so the two implementations can disagree.
//!
//! The checks cover the benchmark fixtures: deterministic automata over
//! max-tropical featured multisets. Non-emptiness is decided by a
//! breadth-first sweep over per-feature partial sums — sums only grow, so
//! a prefix that exceeds a cap is discarded, and the remaining state space
//! is finite. Universality and upper boundedness are decided per feature
//! from the supremum of accumulated counts over useful paths: a positive
//! edge on a useful cycle makes the supremum infinite, otherwise a
//! longest-path relaxation yields it exactly.
//!
//! Caps of at least [`UNTRACKED`] (and `inf` entries) are treated as
//! unbounded: they never constrain a verdict, and leaving them out keeps
//! the swept state space small.

use std::collections::{HashSet, VecDeque};

use featweight_core::automaton::WeightedAutomaton;
use featweight_core::error::{Error, Result};
use featweight_core::multiset::{Weight, WeightSemiring};
use featweight_core::semiring::{ExtendedCount, NumericSemiring};

/// Caps at or above this are treated as unconstrained.
pub const UNTRACKED: u64 = 100_000;

fn checked_automaton(a: &WeightedAutomaton) -> Result<()> {
    if !matches!(
        a.semiring(),
        WeightSemiring::Multiset {
            semiring: NumericSemiring::MaxTropical,
            ..
        }
    ) {
        return Err(Error::UnsupportedOperation(
            "reference verdicts cover max-tropical multiset automata".to_string(),
        ));
    }
    if !a.is_deterministic() {
        return Err(Error::UnsupportedOperation(
            "reference verdicts equate words with paths, which needs a \
             deterministic automaton"
                .to_string(),
        ));
    }
    Ok(())
}

/// Per-feature caps; `None` is unconstrained.
fn caps_of(a: &WeightedAutomaton, m: &Weight) -> Result<Vec<Option<u64>>> {
    a.semiring().validate_config(m, false)?;
    let Weight::Multiset(fm) = m else {
        return Err(Error::InvalidConfiguration(
            "expected a feature-count configuration".to_string(),
        ));
    };
    Ok(fm
        .values()
        .map(|v| match v {
            ExtendedCount::Fin(n) if n < UNTRACKED => Some(n),
            _ => None,
        })
        .collect())
}

fn entry(w: &Weight, idx: usize) -> u64 {
    match w {
        Weight::Multiset(fm) => match fm.get(idx) {
            ExtendedCount::Fin(n) => n,
            // Inadmissible in a max-tropical weight; be defensive.
            ExtendedCount::PosInf => u64::MAX,
            ExtendedCount::NegInf => 0,
        },
        _ => 0,
    }
}

/// Is there an accepted word whose feature counts all stay within `m`?
pub fn nonempty(a: &WeightedAutomaton, m: &Weight) -> Result<bool> {
    checked_automaton(a)?;
    let caps = caps_of(a, m)?;
    let tracked: Vec<(usize, u64)> = caps
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|c| (i, c)))
        .collect();

    let add = |acc: &[u64], w: &Weight| -> Option<Vec<u64>> {
        let mut next = Vec::with_capacity(acc.len());
        for (slot, &(idx, cap)) in acc.iter().zip(&tracked) {
            let sum = slot.saturating_add(entry(w, idx));
            if sum > cap {
                return None;
            }
            next.push(sum);
        }
        Some(next)
    };

    let mut queue = VecDeque::new();
    let mut seen = HashSet::new();
    let zero = vec![0u64; tracked.len()];
    for (q, wi) in a.initial_states() {
        if let Some(acc) = add(&zero, wi) {
            if seen.insert((q, acc.clone())) {
                queue.push_back((q, acc));
            }
        }
    }
    let finals: std::collections::BTreeMap<_, _> = a.final_states().collect();
    while let Some((q, acc)) = queue.pop_front() {
        if let Some(wf) = finals.get(&q) {
            if add(&acc, wf).is_some() {
                return Ok(true);
            }
        }
        for (_, to, w) in a.transitions_from(q) {
            if let Some(next) = add(&acc, w) {
                if seen.insert((to, next.clone())) {
                    queue.push_back((to, next));
                }
            }
        }
    }
    Ok(false)
}

/// The supremum of the accumulated count of feature `idx` over accepted
/// paths; `None` when it is unbounded, and `Some(0)` includes the case of
/// an empty language.
fn feature_sup(a: &WeightedAutomaton, idx: usize, useful: &[bool]) -> Option<u64> {
    let mut dist: Vec<Option<u64>> = vec![None; a.num_states()];
    for (q, wi) in a.initial_states() {
        if useful[q] {
            let v = entry(wi, idx);
            dist[q] = Some(dist[q].map_or(v, |d| d.max(v)));
        }
    }
    let edges: Vec<(usize, usize, u64)> = a
        .transitions()
        .filter(|(q, _, to, _)| useful[*q] && useful[*to])
        .map(|(q, _, to, w)| (q, to, entry(w, idx)))
        .collect();
    let relax = |dist: &mut Vec<Option<u64>>| -> bool {
        let mut changed = false;
        for &(q, to, w) in &edges {
            if let Some(d) = dist[q] {
                let cand = d.saturating_add(w);
                if dist[to].map_or(true, |t| cand > t) {
                    dist[to] = Some(cand);
                    changed = true;
                }
            }
        }
        changed
    };
    for _ in 0..a.num_states() {
        if !relax(&mut dist) {
            break;
        }
    }
    if relax(&mut dist) {
        // Still improving after |Q| rounds: a positive useful cycle.
        return None;
    }
    let mut sup = 0u64;
    for (q, wf) in a.final_states() {
        if useful[q] {
            if let Some(d) = dist[q] {
                sup = sup.max(d.saturating_add(entry(wf, idx)));
            }
        }
    }
    Some(sup)
}

fn useful_states(a: &WeightedAutomaton) -> Vec<bool> {
    a.accessible()
        .into_iter()
        .zip(a.co_accessible())
        .map(|(x, y)| x && y)
        .collect()
}

/// Does every accepted word keep all feature counts within `m`?
pub fn universal(a: &WeightedAutomaton, m: &Weight) -> Result<bool> {
    checked_automaton(a)?;
    let caps = caps_of(a, m)?;
    let useful = useful_states(a);
    for (idx, cap) in caps.iter().enumerate() {
        let Some(cap) = cap else { continue };
        match feature_sup(a, idx, &useful) {
            None => return Ok(false),
            Some(sup) if sup > *cap => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// Are all feature counts bounded across the whole accepted language?
pub fn upper_bounded(a: &WeightedAutomaton) -> Result<bool> {
    checked_automaton(a)?;
    let useful = useful_states(a);
    let n = a
        .semiring()
        .features()
        .map(|f| f.len())
        .unwrap_or_default();
    Ok((0..n).all(|idx| feature_sup(a, idx, &useful).is_some()))
}

/// Is no accepted word free of feature demands? (The all-zero
/// configuration describes no accepted word.)
pub fn lower_bounded(a: &WeightedAutomaton) -> Result<bool> {
    let zero = a.semiring().empty_config();
    Ok(!nonempty(a, &zero)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use featweight_core::format::{parse_automaton, parse_config};

    const MULTIPLAYER: &str = include_str!("../../../fixtures/multiplayer.wa");

    fn config(a: &WeightedAutomaton, literal: &str) -> Weight {
        parse_config(a.semiring(), literal).unwrap()
    }

    #[test]
    fn nonempty_agrees_with_obvious_cases() {
        let a = parse_automaton(MULTIPLAYER).unwrap();
        assert!(nonempty(&a, &config(&a, "{Team=2,Player=2,Solitaire=1,WiFi=3}")).unwrap());
        assert!(!nonempty(&a, &config(&a, "{Team=2,Player=2,Chess=2}")).unwrap());
        assert!(!nonempty(&a, &config(&a, "{}")).unwrap());
        // An unconstrained player count must not blow up the sweep.
        assert!(nonempty(
            &a,
            &config(&a, "{Team=2,Player=inf,Solitaire=1,Chess=2,ProcMod=1,BT=1}")
        )
        .unwrap());
    }

    #[test]
    fn universal_tracks_suprema() {
        let a = parse_automaton(MULTIPLAYER).unwrap();
        let all_inf = "{Team=inf,Player=inf,Solitaire=inf,Chess=inf,\
                       ProcMod=inf,BT=inf,WiFi=inf}";
        assert!(universal(&a, &config(&a, all_inf)).unwrap());
        // Bluetooth is used at most once per run.
        let bt_one = all_inf.replace("BT=inf", "BT=1");
        assert!(universal(&a, &config(&a, &bt_one)).unwrap());
        let bt_zero = all_inf.replace("BT=inf", "BT=0");
        assert!(!universal(&a, &config(&a, &bt_zero)).unwrap());
        // Teams accumulate along the processing-module cycle.
        let team_three = all_inf.replace("Team=inf", "Team=3");
        assert!(!universal(&a, &config(&a, &team_three)).unwrap());
    }

    #[test]
    fn boundedness_matches_the_variant_structure() {
        let a = parse_automaton(MULTIPLAYER).unwrap();
        assert!(!upper_bounded(&a).unwrap());
        assert!(lower_bounded(&a).unwrap());
    }
}
