//! Consistency between the two variability views: words of a weighted
//! automaton on one side, configurations of a cardinality-based feature
//! model on the other.
//!
//! Word → configuration: given an accepted word, search for a valid
//! configuration that covers the word's aggregated weight. This needs
//! lower-bound feature weights (the weight is a requirement); the weight
//! itself, clamped to counts, is the cheapest conceivable cover, and the
//! search widens it feature by feature. Candidates are enumerated
//! breadth-first in the total number of added instances — ties resolved
//! lexicographically in feature order — so a reported configuration adds as
//! few instances as possible.
//!
//! Configuration → word: validate the configuration against the model,
//! then ask the automaton for a satisfying word via the non-emptiness
//! analysis.

use crate::analysis;
use crate::automaton::WeightedAutomaton;
use crate::cfm::CardinalityFeatureModel;
use crate::error::{Error, Result};
use crate::multiset::{FeaturedMultiset, Weight, WeightSemiring};
use crate::pathsearch::ExplorationOrder;
use crate::semiring::{BoundDirection, ExtendedCount, Fin};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MappingDirection {
    WordToConfig,
    ConfigToWord,
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub direction: MappingDirection,
    pub verdict: bool,
    /// False when a larger budget or path bound could still change the
    /// verdict.
    pub exact: bool,
    pub witness_config: Option<FeaturedMultiset>,
    pub witness_word: Option<(Vec<String>, Weight)>,
}

/// The per-feature requirement floor of a word weight: the largest count
/// any component demands for the feature, clamped to zero. `None` marks an
/// unbounded demand no finite configuration can cover.
fn requirement_floor(semiring: &WeightSemiring, w: &Weight) -> Vec<Option<u64>> {
    let features = semiring
        .features()
        .expect("checked: featured weights")
        .as_ref();
    let mut floor = vec![Some(0u64); features.len()];
    let mut raise = |name: &str, v: ExtendedCount| {
        let idx = features.index_of(name).expect("component feature sets are subsets");
        floor[idx] = match (floor[idx], v) {
            (None, _) | (_, ExtendedCount::PosInf) => None,
            (Some(f), ExtendedCount::Fin(n)) => Some(f.max(n)),
            (f, ExtendedCount::NegInf) => f,
        };
    };
    match w {
        Weight::Multiset(fm) => {
            for (name, v) in fm.alphabet().names().iter().zip(fm.values()) {
                raise(name, v);
            }
        }
        Weight::Composite(cw) => {
            for fm in &cw.components {
                for (name, v) in fm.alphabet().names().iter().zip(fm.values()) {
                    raise(name, v);
                }
            }
        }
        Weight::Scalar(_) => unreachable!("checked: featured weights"),
    }
    floor
}

/// Visit increment vectors (each entry ≤ `budget`) in order of ascending
/// total, then lexicographically; stop at the first one `visit` accepts.
fn first_accepted(
    len: usize,
    budget: u64,
    visit: &mut dyn FnMut(&[u64]) -> Result<bool>,
) -> Result<Option<Vec<u64>>> {
    fn place(
        counts: &mut Vec<u64>,
        remaining: u64,
        budget: u64,
        len: usize,
        visit: &mut dyn FnMut(&[u64]) -> Result<bool>,
    ) -> Result<bool> {
        if counts.len() + 1 == len {
            if remaining > budget {
                return Ok(false);
            }
            counts.push(remaining);
            let hit = visit(counts)?;
            counts.pop();
            return Ok(hit);
        }
        for v in 0..=budget.min(remaining) {
            counts.push(v);
            let hit = place(counts, remaining - v, budget, len, visit)?;
            counts.pop();
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }

    let mut winner = None;
    let mut record = |counts: &[u64]| -> Result<bool> {
        if visit(counts)? {
            winner = Some(counts.to_vec());
            return Ok(true);
        }
        Ok(false)
    };
    for total in 0..=budget.saturating_mul(len as u64) {
        let mut counts = Vec::with_capacity(len);
        if place(&mut counts, total, budget, len, &mut record)? {
            break;
        }
    }
    Ok(winner)
}

/// Search for a model-valid configuration covering the weight of `word`.
///
/// The word must be accepted and the automaton's weights must all be
/// lower-bound featured multisets. A `true` verdict is always exact; a
/// `false` verdict only says no witness exists within `budget` extra
/// instances per feature.
pub fn config_exists_for_word(
    cm: &CardinalityFeatureModel,
    a: &WeightedAutomaton,
    word: &[&str],
    budget: u64,
) -> Result<ConsistencyReport> {
    let semiring = a.semiring();
    if semiring.features().is_none()
        || semiring
            .numeric_semirings()
            .iter()
            .any(|s| s.bound_direction() != BoundDirection::Lower)
    {
        return Err(Error::UnsupportedOperation(
            "configuration search needs lower-bound featured weights; \
             upper-bound or scalar weights do not describe requirements"
                .to_string(),
        ));
    }
    let ids = word
        .iter()
        .map(|n| a.symbol_id(n))
        .collect::<Result<Vec<_>>>()?;
    if !a.accepts(&ids)? {
        return Err(Error::InvalidArgument(format!(
            "the word `{}` is not accepted, so no configuration describes it",
            word.join(",")
        )));
    }
    let weight = a.word_weight_by_names(word)?;
    let floor = requirement_floor(semiring, &weight);

    let no_witness = |exact: bool| ConsistencyReport {
        direction: MappingDirection::WordToConfig,
        verdict: false,
        exact,
        witness_config: None,
        witness_word: None,
    };
    let Some(base) = floor.into_iter().collect::<Option<Vec<u64>>>() else {
        // An unbounded requirement: provably no finite configuration.
        return Ok(no_witness(true));
    };

    let features = Arc::clone(semiring.features().expect("checked above"));
    let candidate = |added: &[u64]| -> Result<FeaturedMultiset> {
        FeaturedMultiset::from_pairs(
            Arc::clone(&features),
            Fin(0),
            features
                .names()
                .iter()
                .zip(base.iter().zip(added))
                .map(|(name, (b, extra))| (name.as_str(), Fin(b + extra))),
        )
    };
    let found = first_accepted(features.len(), budget, &mut |added| {
        Ok(cm.validate_config(&candidate(added)?)?.valid)
    })?;
    match found {
        Some(added) => {
            let witness = candidate(&added)?;
            debug_assert!(semiring
                .satisfies(&Weight::Multiset(witness.clone()), &weight)
                .unwrap_or(false));
            Ok(ConsistencyReport {
                direction: MappingDirection::WordToConfig,
                verdict: true,
                exact: true,
                witness_config: Some(witness),
                witness_word: Some((word.iter().map(|s| s.to_string()).collect(), weight)),
            })
        }
        None => Ok(no_witness(false)),
    }
}

/// Search for an accepted word whose weight the configuration satisfies.
///
/// The configuration must be valid for the model — an invalid one is an
/// error carrying the first violation — and the word search is delegated to
/// the non-emptiness analysis with path bound `k`.
pub fn word_exists_for_config(
    cm: &CardinalityFeatureModel,
    a: &WeightedAutomaton,
    m: &Weight,
    k: usize,
    order: &ExplorationOrder,
) -> Result<ConsistencyReport> {
    let Weight::Multiset(fm) = m else {
        return Err(Error::UnsupportedOperation(
            "consistency analysis needs a feature-count configuration".to_string(),
        ));
    };
    let report = cm.validate_config(fm)?;
    if !report.valid {
        let why = report
            .violations
            .first()
            .map(|v| v.description.clone())
            .unwrap_or_else(|| "unsatisfiable model".to_string());
        return Err(Error::InvalidConfiguration(format!(
            "the configuration violates the feature model: {why}"
        )));
    }
    let verdict = analysis::non_emptiness(a, m, k, order)?;
    Ok(ConsistencyReport {
        direction: MappingDirection::ConfigToWord,
        verdict: verdict.verdict,
        exact: verdict.exact,
        witness_config: None,
        witness_word: verdict.witness,
    })
}
