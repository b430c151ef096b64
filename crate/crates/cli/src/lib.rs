//! Command-line front end for the featweight analyses.
//!
//! The binary lives in `main.rs`; this library exposes the pieces that are
//! worth testing on their own — the benchmark harness, the standard
//! configuration suite, and the reference verdicts it checks against.

pub mod bench;
pub mod suite;
pub mod truth;
