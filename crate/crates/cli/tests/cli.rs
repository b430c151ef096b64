//! End-to-end tests of the `featweight` binary: report-line shapes and the
//! exit-code contract (0 = true/valid, 1 = false/invalid, 2 = usage or
//! parse errors).

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_featweight"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn weight_prints_bare_scalars_and_exits_by_acceptance() {
    let (code, stdout, _) = run(&["weight", &fixture("fig4.wa"), "--word", "a,a,a"]);
    assert_eq!((code, stdout.trim()), (0, "WEIGHT=8"));

    // The empty word is spelled as an empty list.
    let (code, stdout, _) = run(&["weight", &fixture("fig4.wa"), "--word", ""]);
    assert_eq!((code, stdout.trim()), (0, "WEIGHT=2"));
}

#[test]
fn weight_prints_multiset_literals() {
    let word = "addTeam,addSolitaire,addProcMod,addTeam,addTeam,addChess,addBT";
    let (code, stdout, _) = run(&["weight", &fixture("multiplayer.wa"), "--word", word]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        "WEIGHT={Team=3,Player=3,Solitaire=1,Chess=2,ProcMod=3,BT=1}"
    );

    let (code, stdout, _) = run(&["accepts", &fixture("multiplayer.wa"), "--word", word]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), format!("PROBLEM=acceptance WORD={word} VERDICT=true"));
}

#[test]
fn parse_and_usage_errors_exit_two() {
    let (code, _, stderr) = run(&["weight", &fixture("fig4.wa"), "--word", "a,b"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown symbol"), "stderr: {stderr}");

    let (code, _, _) = run(&["weight", "/nonexistent/x.wa", "--word", "a"]);
    assert_eq!(code, 2);

    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);

    let (code, _, stderr) = run(&[
        "consistency",
        &fixture("mpg.cfm"),
        &fixture("multiplayer.wa"),
        "--word",
        "addTeam",
        "--config",
        "{Team=2}",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exactly one"), "stderr: {stderr}");
}

#[test]
fn nonempty_reports_a_witness_and_accepts_unbounded_entries() {
    let (code, stdout, _) = run(&[
        "nonempty",
        &fixture("multiplayer.wa"),
        "--config",
        "{Team=2,Player=inf,Solitaire=1,Chess=2,ProcMod=1,BT=1,WiFi=3}",
        "--k",
        "500",
        "--order",
        "Player,Team,ProcMod",
    ]);
    assert_eq!(code, 0);
    let line = stdout.trim();
    assert!(
        line.starts_with(
            "PROBLEM=non-emptiness \
             CONFIG={Team=2,Player=inf,Solitaire=1,Chess=2,ProcMod=1,BT=1,WiFi=3} \
             VERDICT=true EXACT=true K=500 WITNESS="
        ),
        "line: {line}"
    );
}

#[test]
fn universal_counterexamples_exit_one() {
    let (code, stdout, _) = run(&[
        "universal",
        &fixture("multiplayer.wa"),
        "--config",
        "{Team=inf,Player=5,Solitaire=inf,Chess=inf,ProcMod=inf,BT=inf,WiFi=inf}",
        "--k",
        "500",
        "--order",
        "Player,Team,ProcMod",
    ]);
    assert_eq!(code, 1);
    let line = stdout.trim();
    assert!(line.starts_with("PROBLEM=universality CONFIG="), "line: {line}");
    assert!(line.contains(" VERDICT=false EXACT=true K=500 WITNESS="), "line: {line}");
}

#[test]
fn boundedness_reports_name_their_strategy() {
    let (code, stdout, _) =
        run(&["upperbound", &fixture("multiplayer.wa"), "--k", "200", "--exact-cycles"]);
    assert_eq!(code, 1);
    assert_eq!(
        stdout.trim(),
        "PROBLEM=upper-boundedness STRATEGY=exact-cycles VERDICT=false EXACT=true K=200"
    );

    let (code, stdout, _) =
        run(&["upperbound", &fixture("no-wifi-chess-procmod-maxmax.wa"), "--k", "200"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        "PROBLEM=upper-boundedness STRATEGY=bounded VERDICT=true EXACT=false K=200"
    );

    let (code, stdout, _) = run(&["lowerbound", &fixture("multiplayer.wa"), "--k", "200"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        "PROBLEM=lower-boundedness VERDICT=true EXACT=true K=200"
    );
}

#[test]
fn validate_lists_violations() {
    let (code, stdout, _) = run(&[
        "validate",
        &fixture("mpg.cfm"),
        "--config",
        "{Team=2,Player=2,Chess=2}",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        "PROBLEM=validation CONFIG={Team=2,Player=2,Chess=2} VERDICT=true"
    );

    let (code, stdout, _) = run(&[
        "validate",
        &fixture("mpg.cfm"),
        "--config",
        "{BT=1,ProcMod=4,Team=2,Player=30,Solitaire=1}",
    ]);
    assert_eq!(code, 1);
    assert!(stdout.contains("VERDICT=false"), "stdout: {stdout}");
    assert!(stdout.contains("VIOLATION=exclude:Team/ProcMod:"), "stdout: {stdout}");
}

#[test]
fn project_drops_unsatisfied_transitions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("projected.wa");
    let (code, stdout, _) = run(&[
        "project",
        &fixture("fig8.wa"),
        "--config",
        "{ProcMod=1,BT=1}",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PROBLEM=projection"), "stdout: {stdout}");

    let text = fs::read_to_string(&out).unwrap();
    let trans: Vec<&str> = text.lines().filter(|l| l.starts_with("trans")).collect();
    assert!(trans.iter().any(|l| l.contains("addBT")), "kept: {trans:?}");
    assert!(!trans.iter().any(|l| l.contains("addWiFi")), "kept: {trans:?}");
}

#[test]
fn consistency_reports_both_directions() {
    let (code, stdout, _) = run(&[
        "consistency",
        &fixture("mpg.cfm"),
        &fixture("multiplayer.wa"),
        "--word",
        "addTeam,addSolitaire,addProcMod,addTeam,addTeam,addChess,addBT",
    ]);
    assert_eq!(code, 0);
    let line = stdout.trim();
    assert!(line.starts_with("PROBLEM=consistency DIRECTION=word-to-config WORD="));
    assert!(line.contains(" VERDICT=true EXACT=true BUDGET=6 WITNESS="), "line: {line}");

    let (code, stdout, _) = run(&[
        "consistency",
        &fixture("mpg.cfm"),
        &fixture("multiplayer.wa"),
        "--config",
        "{Team=2,Player=2,Chess=2,WiFi=3,ProcMod=3}",
        "--k",
        "800",
        "--order",
        "Player,Team,ProcMod",
    ]);
    assert_eq!(code, 0);
    let line = stdout.trim();
    assert!(line.starts_with("PROBLEM=consistency DIRECTION=config-to-word CONFIG="));
    assert!(line.contains(" VERDICT=true EXACT=true K=800 WITNESS="), "line: {line}");

    // A model-invalid configuration is a precondition failure, not a
    // false verdict.
    let (code, _, stderr) = run(&[
        "consistency",
        &fixture("mpg.cfm"),
        &fixture("multiplayer.wa"),
        "--config",
        "{Team=2,Player=2,Chess=2,WiFi=3}",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("violates the feature model"), "stderr: {stderr}");
}

#[test]
fn bench_writes_timing_and_truth_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let plan_path = dir.path().join("probe.plan");
    fs::write(
        &plan_path,
        format!(
            "automaton {}\nproblem nonempty\nproblem upperbound\n\
             order Player Team ProcMod\n\
             config {{Team=2,Player=inf,Solitaire=1,ProcMod=1,BT=1}}\n\
             k 50\nrepetitions 2\nwarmups 0\n",
            fixture("no-wifi-chess-procmod.wa")
        ),
    )
    .unwrap();
    let out = dir.path().join("runs.csv");
    let (code, stdout, _) = run(&["bench", plan_path.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("RUNS=4"), "stdout: {stdout}");

    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("automaton,problem,config,k,repetition,wall_time_ms,verdict,exact"));
    let truth = fs::read_to_string(dir.path().join("runs.truth.csv")).unwrap();
    assert!(truth.starts_with("automaton,problem,config,verdict"));

    let missing_k = dir.path().join("broken.plan");
    fs::write(&missing_k, "automaton x.wa\nproblem nonempty\nconfig {}\n").unwrap();
    let (code, _, stderr) =
        run(&["bench", missing_k.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("path bounds"), "stderr: {stderr}");
}

#[test]
fn export_renders_dot() {
    let (code, stdout, _) = run(&["export", &fixture("fig4.wa")]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("digraph"), "stdout: {stdout}");
    assert!(stdout.contains("\"q1\" -> \"q2\" [label=\"a / 1\"]"), "stdout: {stdout}");
}
