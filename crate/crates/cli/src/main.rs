//! `featweight` — weighted-automaton analyses for feature-count product
//! lines, from the command line.
//!
//! Every subcommand prints a machine-readable `KEY=VALUE` report line and
//! exits 0 when the verdict is true (or the input valid), 1 when it is
//! false (or invalid), and 2 on usage or parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use featweight_cli::bench;
use featweight_core::analysis::{self, AnalysisVerdict, BoundednessStrategy};
use featweight_core::automaton::WeightedAutomaton;
use featweight_core::cfm::{parse_cfm, CardinalityFeatureModel};
use featweight_core::format::{parse_automaton, parse_config, parse_multiset, serialize_automaton};
use featweight_core::mapping::{self, MappingDirection};
use featweight_core::multiset::{FeatureAlphabet, Weight};
use featweight_core::pathsearch::ExplorationOrder;
use featweight_core::semiring::ExtendedCount;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "featweight", version, about = "Weighted-automaton analyses for feature-count product lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate weight of a word across all its accepting paths.
    Weight {
        /// Automaton document.
        wa: PathBuf,
        /// Comma-separated action names; empty for the empty word.
        #[arg(long)]
        word: String,
    },
    /// Is a word accepted (aggregate weight differs from the zero)?
    Accepts {
        wa: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Does the configuration satisfy some accepted word?
    Nonempty {
        wa: PathBuf,
        /// Configuration literal, e.g. `{Team=2,Player=inf}`.
        #[arg(long)]
        config: String,
        /// Path bound: how many best-ranked paths the search materializes.
        #[arg(long, default_value_t = 1500)]
        k: usize,
        /// Comma-separated feature names explored first.
        #[arg(long)]
        order: Option<String>,
    },
    /// Does the configuration satisfy every accepted word?
    Universal {
        wa: PathBuf,
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 1500)]
        k: usize,
        #[arg(long)]
        order: Option<String>,
    },
    /// Is there a configuration under which the language is empty?
    Lowerbound {
        wa: PathBuf,
        #[arg(long, default_value_t = 1500)]
        k: usize,
        #[arg(long)]
        order: Option<String>,
    },
    /// Is there a configuration satisfying every accepted word?
    Upperbound {
        wa: PathBuf,
        #[arg(long, default_value_t = 1500)]
        k: usize,
        #[arg(long)]
        order: Option<String>,
        /// Decide from pumpable cycles instead of a bounded search.
        #[arg(long)]
        exact_cycles: bool,
    },
    /// Write the automaton restricted to transitions the configuration
    /// satisfies.
    Project {
        wa: PathBuf,
        #[arg(long)]
        config: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Validate a configuration against a cardinality feature model.
    Validate {
        cfm: PathBuf,
        #[arg(long)]
        config: String,
    },
    /// Check model/automaton consistency for one word or one configuration.
    Consistency {
        cfm: PathBuf,
        wa: PathBuf,
        /// Word to cover with a model-valid configuration.
        #[arg(long)]
        word: Option<String>,
        /// Model-valid configuration to realize by an accepted word.
        #[arg(long)]
        config: Option<String>,
        /// Extra instances per feature the configuration search may add.
        #[arg(long, default_value_t = 6)]
        budget: u64,
        #[arg(long, default_value_t = 1500)]
        k: usize,
        #[arg(long)]
        order: Option<String>,
    },
    /// Run a benchmark plan into a timing CSV plus a reference-verdict CSV.
    Bench {
        plan: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Render the automaton as Graphviz DOT.
    Export {
        wa: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_automaton(path: &Path) -> Result<WeightedAutomaton> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading `{}`", path.display()))?;
    parse_automaton(&text).with_context(|| format!("parsing `{}`", path.display()))
}

fn load_cfm(path: &Path) -> Result<CardinalityFeatureModel> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading `{}`", path.display()))?;
    parse_cfm(&text).with_context(|| format!("parsing `{}`", path.display()))
}

fn split_word(word: &str) -> Vec<&str> {
    word.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn parse_order(text: Option<&str>) -> Result<ExplorationOrder> {
    match text {
        None => Ok(ExplorationOrder::default()),
        Some(s) => Ok(ExplorationOrder::new(
            s.split(',').map(str::trim).filter(|t| !t.is_empty()),
        )?),
    }
}

/// Weights print as bare counts in scalar domains and as multiset literals
/// otherwise.
fn weight_literal(w: &Weight) -> String {
    match w {
        Weight::Scalar(v) => v.to_string(),
        other => other.to_string(),
    }
}

fn witness_suffix(verdict: &AnalysisVerdict) -> String {
    match &verdict.witness {
        Some((word, _)) => format!(" WITNESS={}", word.join(",")),
        None => String::new(),
    }
}

fn report_analysis(problem: &str, config: Option<&Weight>, v: &AnalysisVerdict) -> bool {
    let config = match config {
        Some(m) => format!(" CONFIG={m}"),
        None => String::new(),
    };
    println!(
        "PROBLEM={problem}{config} VERDICT={} EXACT={} K={}{}",
        v.verdict,
        v.exact,
        v.k_used,
        witness_suffix(v)
    );
    v.verdict
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Weight { wa, word } => {
            let a = load_automaton(&wa)?;
            let w = a.word_weight_by_names(&split_word(&word))?;
            println!("WEIGHT={}", weight_literal(&w));
            Ok(!a.semiring().is_zero(&w))
        }
        Command::Accepts { wa, word } => {
            let a = load_automaton(&wa)?;
            let w = a.word_weight_by_names(&split_word(&word))?;
            let accepted = !a.semiring().is_zero(&w);
            println!("PROBLEM=acceptance WORD={word} VERDICT={accepted}");
            Ok(accepted)
        }
        Command::Nonempty { wa, config, k, order } => {
            let a = load_automaton(&wa)?;
            let m = parse_config(a.semiring(), &config)?;
            // The engine demands finite counts; stand in for `inf` with a
            // count no bounded search can reach.
            let v = analysis::non_emptiness(&a, &bench::clamp_unbounded(&m), k, &parse_order(order.as_deref())?)?;
            Ok(report_analysis("non-emptiness", Some(&m), &v))
        }
        Command::Universal { wa, config, k, order } => {
            let a = load_automaton(&wa)?;
            let m = parse_config(a.semiring(), &config)?;
            let v = analysis::universality(&a, &m, k, &parse_order(order.as_deref())?)?;
            Ok(report_analysis("universality", Some(&m), &v))
        }
        Command::Lowerbound { wa, k, order } => {
            let a = load_automaton(&wa)?;
            let v = analysis::lower_boundedness(&a, k, &parse_order(order.as_deref())?)?;
            Ok(report_analysis("lower-boundedness", None, &v))
        }
        Command::Upperbound { wa, k, order, exact_cycles } => {
            let a = load_automaton(&wa)?;
            let strategy = if exact_cycles {
                BoundednessStrategy::ExactCycles
            } else {
                BoundednessStrategy::Bounded
            };
            let v = analysis::upper_boundedness(&a, k, &parse_order(order.as_deref())?, strategy)?;
            let tag = if exact_cycles { "exact-cycles" } else { "bounded" };
            println!(
                "PROBLEM=upper-boundedness STRATEGY={tag} VERDICT={} EXACT={} K={}{}",
                v.verdict,
                v.exact,
                v.k_used,
                witness_suffix(&v)
            );
            Ok(v.verdict)
        }
        Command::Project { wa, config, out } => {
            let a = load_automaton(&wa)?;
            let m = parse_config(a.semiring(), &config)?;
            let projected = analysis::project(&a, &m)?;
            fs::write(&out, serialize_automaton(&projected))
                .with_context(|| format!("writing `{}`", out.display()))?;
            println!("PROBLEM=projection CONFIG={m} OUT={}", out.display());
            Ok(true)
        }
        Command::Validate { cfm, config } => {
            let model = load_cfm(&cfm)?;
            let alphabet = Arc::new(FeatureAlphabet::new(model.concrete_features())?);
            let m = parse_multiset(&alphabet, ExtendedCount::Fin(0), &config)?;
            let report = model.validate_config(&m)?;
            println!("PROBLEM=validation CONFIG={m} VERDICT={}", report.valid);
            for v in &report.violations {
                println!("VIOLATION={}: {}", v.constraint, v.description);
            }
            Ok(report.valid)
        }
        Command::Consistency { cfm, wa, word, config, budget, k, order } => {
            let model = load_cfm(&cfm)?;
            let a = load_automaton(&wa)?;
            match (word, config) {
                (Some(word), None) => {
                    let symbols = split_word(&word);
                    let report = mapping::config_exists_for_word(&model, &a, &symbols, budget)?;
                    debug_assert_eq!(report.direction, MappingDirection::WordToConfig);
                    let witness = report
                        .witness_config
                        .as_ref()
                        .map(|m| format!(" WITNESS={m}"))
                        .unwrap_or_default();
                    println!(
                        "PROBLEM=consistency DIRECTION=word-to-config WORD={word} \
                         VERDICT={} EXACT={} BUDGET={budget}{witness}",
                        report.verdict, report.exact
                    );
                    Ok(report.verdict)
                }
                (None, Some(config)) => {
                    let m = parse_config(a.semiring(), &config)?;
                    let report = mapping::word_exists_for_config(
                        &model,
                        &a,
                        &m,
                        k,
                        &parse_order(order.as_deref())?,
                    )?;
                    debug_assert_eq!(report.direction, MappingDirection::ConfigToWord);
                    let witness = report
                        .witness_word
                        .as_ref()
                        .map(|(w, _)| format!(" WITNESS={}", w.join(",")))
                        .unwrap_or_default();
                    println!(
                        "PROBLEM=consistency DIRECTION=config-to-word CONFIG={m} \
                         VERDICT={} EXACT={} K={k}{witness}",
                        report.verdict, report.exact
                    );
                    Ok(report.verdict)
                }
                _ => bail!("pass exactly one of --word or --config"),
            }
        }
        Command::Bench { plan, out } => {
            let text = fs::read_to_string(&plan)
                .with_context(|| format!("reading `{}`", plan.display()))?;
            let base = plan.parent().unwrap_or(Path::new("."));
            let parsed = bench::parse_plan(&text, base)?;
            let outcome = bench::run_bench(&parsed, &out)?;
            println!(
                "BENCH PLAN={} RUNS={} OUT={} TRUTH={}",
                plan.display(),
                outcome.recorded_runs,
                outcome.csv_path.display(),
                outcome.truth_path.display()
            );
            Ok(true)
        }
        Command::Export { wa, out } => {
            let a = load_automaton(&wa)?;
            let dot = export_dot(&a);
            match out {
                Some(path) => {
                    fs::write(&path, dot)
                        .with_context(|| format!("writing `{}`", path.display()))?;
                    println!("EXPORTED={}", path.display());
                }
                None => print!("{dot}"),
            }
            Ok(true)
        }
    }
}

/// Graphviz rendering: final states are double circles, initial weights
/// arrive on arrows from invisible points, transitions are labelled
/// `action / weight`.
fn export_dot(a: &WeightedAutomaton) -> String {
    use std::fmt::Write;

    let mut dot = String::from("digraph automaton {\n  rankdir=LR;\n");
    let finals: Vec<_> = a.final_states().collect();
    for q in 0..a.num_states() {
        let name = a.state_name(q);
        match finals.iter().find(|(f, _)| *f == q) {
            Some((_, w)) => writeln!(
                dot,
                "  \"{name}\" [shape=doublecircle, label=\"{name} / {}\"];",
                weight_literal(w)
            )
            .unwrap(),
            None => writeln!(dot, "  \"{name}\" [shape=circle];").unwrap(),
        }
    }
    for (n, (q, w)) in a.initial_states().enumerate() {
        writeln!(dot, "  __start{n} [shape=point];").unwrap();
        writeln!(
            dot,
            "  __start{n} -> \"{}\" [label=\"{}\"];",
            a.state_name(q),
            weight_literal(w)
        )
        .unwrap();
    }
    for (q, s, to, w) in a.transitions() {
        writeln!(
            dot,
            "  \"{}\" -> \"{}\" [label=\"{} / {}\"];",
            a.state_name(q),
            a.state_name(to),
            a.symbol_name(s),
            weight_literal(w)
        )
        .unwrap();
    }
    dot.push_str("}\n");
    dot
}
