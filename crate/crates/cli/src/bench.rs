//! The benchmark harness: a line-oriented plan names automata, problems,
//! configurations, and path bounds; running it times every analysis run
//! into a CSV and records reference verdicts next to it.
//!
//! Plan grammar (`#` starts a comment):
//!
//! ```text
//! automaton multiplayer.wa        # relative to the plan file
//! problem nonempty                # also: universal, lowerbound, upperbound
//! order Player Team ProcMod
//! suite standard                  # the 17-configuration suite
//! config {Team=2,Player=inf}      # additional literals, one per line
//! k 500 1000 1500 2000 2500
//! repetitions 10
//! warmups 3
//! ```
//!
//! Repetitions default to 10 recorded runs after 3 unrecorded warm-ups.
//! Runs are strictly sequential so the timings stay honest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use featweight_core::analysis::{self, BoundednessStrategy};
use featweight_core::automaton::WeightedAutomaton;
use featweight_core::format::{parse_automaton, parse_config};
use featweight_core::multiset::Weight;
use featweight_core::pathsearch::ExplorationOrder;
use featweight_core::semiring::ExtendedCount;

use crate::suite::STANDARD_SUITE;
use crate::truth;

/// The stand-in for `inf` entries when an analysis insists on finite
/// demands. Far above any count a benchmark run can accumulate, and above
/// the reference checker's tracking threshold, so both sides treat the
/// entry as unconstrained.
pub const UNBOUNDED_STAND_IN: u64 = 1_000_000;

pub const CSV_HEADER: [&str; 8] = [
    "automaton",
    "problem",
    "config",
    "k",
    "repetition",
    "wall_time_ms",
    "verdict",
    "exact",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    NonEmptiness,
    Universality,
    LowerBoundedness,
    UpperBoundedness,
}

impl Problem {
    pub fn token(self) -> &'static str {
        match self {
            Problem::NonEmptiness => "non-emptiness",
            Problem::Universality => "universality",
            Problem::LowerBoundedness => "lower-boundedness",
            Problem::UpperBoundedness => "upper-boundedness",
        }
    }

    fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "nonempty" => Problem::NonEmptiness,
            "universal" => Problem::Universality,
            "lowerbound" => Problem::LowerBoundedness,
            "upperbound" => Problem::UpperBoundedness,
            _ => return None,
        })
    }

    /// Non-emptiness and universality take a configuration; the
    /// boundedness problems quantify over all of them.
    fn takes_config(self) -> bool {
        matches!(self, Problem::NonEmptiness | Problem::Universality)
    }
}

#[derive(Debug, Clone)]
pub struct BenchPlan {
    /// Automata as (name as written, resolved path).
    pub automata: Vec<(String, PathBuf)>,
    pub problems: Vec<Problem>,
    /// Configuration literals, applied to every automaton.
    pub configs: Vec<String>,
    pub k_values: Vec<usize>,
    pub order: ExplorationOrder,
    pub repetitions: usize,
    pub warmups: usize,
}

/// Parse a plan; `base` anchors relative automaton paths (usually the plan
/// file's directory).
pub fn parse_plan(text: &str, base: &Path) -> Result<BenchPlan> {
    let mut plan = BenchPlan {
        automata: Vec::new(),
        problems: Vec::new(),
        configs: Vec::new(),
        k_values: Vec::new(),
        order: ExplorationOrder::default(),
        repetitions: 10,
        warmups: 3,
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fail = |msg: String| anyhow!("plan line {line_no}: {msg}");
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        if rest.is_empty() {
            return Err(fail(format!("`{keyword}` needs an argument")));
        }
        match keyword {
            "automaton" => plan.automata.push((rest.to_string(), base.join(rest))),
            "problem" => {
                let p = Problem::from_keyword(rest).ok_or_else(|| {
                    fail(format!(
                        "unknown problem `{rest}` (expected nonempty, universal, \
                         lowerbound, or upperbound)"
                    ))
                })?;
                plan.problems.push(p);
            }
            "order" => {
                plan.order = ExplorationOrder::new(rest.split_whitespace())
                    .map_err(|e| fail(e.to_string()))?;
            }
            "k" => {
                for tok in rest.split_whitespace() {
                    let k: usize = tok
                        .parse()
                        .map_err(|_| fail(format!("bad path bound `{tok}`")))?;
                    if k == 0 {
                        return Err(fail("path bounds must be positive".to_string()));
                    }
                    plan.k_values.push(k);
                }
            }
            "suite" => {
                if rest != "standard" {
                    return Err(fail(format!("unknown suite `{rest}`")));
                }
                plan.configs.extend(STANDARD_SUITE.iter().map(|s| s.to_string()));
            }
            "config" => plan.configs.push(rest.to_string()),
            "repetitions" => {
                plan.repetitions = rest
                    .parse()
                    .map_err(|_| fail(format!("bad repetition count `{rest}`")))?;
                if plan.repetitions == 0 {
                    return Err(fail("repetitions must be positive".to_string()));
                }
            }
            "warmups" => {
                plan.warmups = rest
                    .parse()
                    .map_err(|_| fail(format!("bad warm-up count `{rest}`")))?;
            }
            other => return Err(fail(format!("unknown keyword `{other}`"))),
        }
    }
    if plan.automata.is_empty() {
        bail!("the plan names no automata");
    }
    if plan.problems.is_empty() {
        bail!("the plan names no problems");
    }
    if plan.k_values.is_empty() {
        bail!("the plan names no path bounds (add a `k` line)");
    }
    if plan.configs.is_empty() && plan.problems.iter().any(|p| p.takes_config()) {
        bail!("the plan names configuration-dependent problems but no configurations");
    }
    Ok(plan)
}

/// Replace unbounded entries with [`UNBOUNDED_STAND_IN`]. Any witness
/// under the stand-in also witnesses the unbounded original; the converse
/// gap only opens for words demanding over a million instances of a
/// feature, far past what a bounded search explores.
pub fn clamp_unbounded(config: &Weight) -> Weight {
    match config {
        Weight::Multiset(m) => {
            let mut out = m.clone();
            for idx in 0..m.alphabet().len() {
                if m.get(idx) == ExtendedCount::PosInf {
                    out.set(idx, ExtendedCount::Fin(UNBOUNDED_STAND_IN));
                }
            }
            Weight::Multiset(out)
        }
        other => other.clone(),
    }
}

pub struct BenchOutcome {
    pub recorded_runs: usize,
    pub csv_path: PathBuf,
    pub truth_path: PathBuf,
}

fn reference_verdict(
    a: &WeightedAutomaton,
    problem: Problem,
    config: Option<&Weight>,
) -> Result<bool> {
    let verdict = match problem {
        Problem::NonEmptiness => truth::nonempty(a, config.expect("config-dependent"))?,
        Problem::Universality => truth::universal(a, config.expect("config-dependent"))?,
        Problem::LowerBoundedness => truth::lower_bounded(a)?,
        Problem::UpperBoundedness => truth::upper_bounded(a)?,
    };
    Ok(verdict)
}

fn timed_verdict(
    a: &WeightedAutomaton,
    problem: Problem,
    config: Option<&Weight>,
    k: usize,
    order: &ExplorationOrder,
) -> Result<(bool, bool)> {
    let v = match problem {
        Problem::NonEmptiness => {
            analysis::non_emptiness(a, config.expect("config-dependent"), k, order)?
        }
        Problem::Universality => {
            analysis::universality(a, config.expect("config-dependent"), k, order)?
        }
        Problem::LowerBoundedness => analysis::lower_boundedness(a, k, order)?,
        Problem::UpperBoundedness => {
            analysis::upper_boundedness(a, k, order, BoundednessStrategy::Bounded)?
        }
    };
    Ok((v.verdict, v.exact))
}

/// Run the plan, writing recorded timings to `out` and the k-independent
/// reference verdicts to `out` with its extension replaced by
/// `truth.csv`. Fixtures load and reference verdicts compute before any
/// timing begins, so a broken fixture cannot waste a benchmark run.
pub fn run_bench(plan: &BenchPlan, out: &Path) -> Result<BenchOutcome> {
    let mut automata = Vec::new();
    for (name, path) in &plan.automata {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading automaton `{}`", path.display()))?;
        let a = parse_automaton(&text)
            .with_context(|| format!("parsing automaton `{}`", path.display()))?;
        automata.push((name.clone(), a));
    }

    let truth_path = out.with_extension("truth.csv");
    let mut truth_csv = csv::Writer::from_path(&truth_path)
        .with_context(|| format!("creating `{}`", truth_path.display()))?;
    truth_csv.write_record(["automaton", "problem", "config", "verdict"])?;
    for (name, a) in &automata {
        for &problem in &plan.problems {
            let literals: Vec<Option<&str>> = if problem.takes_config() {
                plan.configs.iter().map(|c| Some(c.as_str())).collect()
            } else {
                vec![None]
            };
            for literal in literals {
                let config = literal
                    .map(|l| parse_config(a.semiring(), l))
                    .transpose()
                    .with_context(|| format!("configuration for `{name}`"))?;
                let verdict = reference_verdict(a, problem, config.as_ref())?;
                truth_csv.write_record([
                    name.as_str(),
                    problem.token(),
                    literal.unwrap_or(""),
                    if verdict { "true" } else { "false" },
                ])?;
            }
        }
    }
    truth_csv.flush()?;

    let mut csv = csv::Writer::from_path(out)
        .with_context(|| format!("creating `{}`", out.display()))?;
    csv.write_record(CSV_HEADER)?;
    let mut recorded = 0usize;
    for (name, a) in &automata {
        for &problem in &plan.problems {
            let literals: Vec<Option<&str>> = if problem.takes_config() {
                plan.configs.iter().map(|c| Some(c.as_str())).collect()
            } else {
                vec![None]
            };
            for &k in &plan.k_values {
                let mut cell_times = Vec::new();
                for &literal in &literals {
                    let config = literal
                        .map(|l| parse_config(a.semiring(), l))
                        .transpose()?
                        .map(|c| match problem {
                            // The non-emptiness engine insists on finite
                            // demands; see `clamp_unbounded`.
                            Problem::NonEmptiness => clamp_unbounded(&c),
                            _ => c,
                        });
                    for _ in 0..plan.warmups {
                        timed_verdict(a, problem, config.as_ref(), k, &plan.order)?;
                    }
                    for rep in 1..=plan.repetitions {
                        let started = Instant::now();
                        let (verdict, exact) =
                            timed_verdict(a, problem, config.as_ref(), k, &plan.order)?;
                        let ms = started.elapsed().as_secs_f64() * 1e3;
                        csv.write_record([
                            name.as_str(),
                            problem.token(),
                            literal.unwrap_or(""),
                            &k.to_string(),
                            &rep.to_string(),
                            &format!("{ms:.3}"),
                            if verdict { "true" } else { "false" },
                            if exact { "true" } else { "false" },
                        ])?;
                        cell_times.push(ms);
                        recorded += 1;
                    }
                }
                let mean = cell_times.iter().sum::<f64>() / cell_times.len() as f64;
                csv.write_record([
                    name.as_str(),
                    problem.token(),
                    "",
                    &k.to_string(),
                    "mean",
                    &format!("{mean:.3}"),
                    "",
                    "",
                ])?;
            }
        }
    }
    csv.flush()?;
    Ok(BenchOutcome {
        recorded_runs: recorded,
        csv_path: out.to_path_buf(),
        truth_path,
    })
}
