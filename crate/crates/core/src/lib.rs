//! Weighted automata over featured multiset semirings.
//!
//! The crate models variable behavior: words of a finite automaton are
//! sequences of actions, and their weights — scalars, multisets of feature
//! instances, or tuples of such multisets — describe what a product needs
//! or tolerates in order to run them. Choosing a semiring fixes how weights
//! combine along a path and across paths, and therefore which question a
//! weight answers (accumulated demand, peak demand, bottleneck capacity).
//!
//! * [`semiring`] — the extended counting carrier and the five numeric
//!   semirings over it.
//! * [`multiset`] — feature alphabets, featured multisets, and weight
//!   domains assembled from the numeric semirings, including the
//!   configuration-satisfaction order.
//! * [`automaton`] — weighted automata, path and word weights, and the
//!   text format in [`format`].
//! * [`pathsearch`] — best-first enumeration of accepting paths under a
//!   path bound, the engine behind the analyses.
//! * [`analysis`] — non-emptiness, universality, boundedness, and
//!   projection of an automaton to a configuration.
//! * [`cfm`] — cardinality-based feature models and configuration
//!   validation.
//! * [`mapping`] — consistency between accepted words and valid
//!   configurations.

pub mod analysis;
pub mod automaton;
pub mod cfm;
pub mod error;
#[cfg(test)]
pub(crate) mod examples;
pub mod format;
pub mod mapping;
pub mod multiset;
pub mod pathsearch;
pub mod semiring;

pub use error::{Error, Result};
