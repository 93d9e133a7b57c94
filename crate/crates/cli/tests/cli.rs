//! End-to-end tests against the built binary: exit codes, certificate
//! round-trips, and byte-identical output.

use phylograph::{verify_elimination_ordering, Digraph, Hole, SimpleGraph};
use phylograph_cli::doc::DigraphDocument;
use std::path::Path;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phylograph"))
}

fn write(dir: &Path, name: &str, contents: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

const EXAMPLE: &str = r#"{"n": 5, "arcs": [[0,1],[0,3],[1,2],[1,4],[2,3],[3,4]]}"#;

#[test]
fn moralize_reproduces_the_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "example.json", EXAMPLE);
    let out = run(&["moralize", input.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let phylogeny = report["phylogeny"].as_array().unwrap();
    assert_eq!(phylogeny.len(), 8);
    // The K4 on the first four vertices: all six pairs appear.
    for pair in [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]] {
        assert!(
            phylogeny.iter().any(|e| e[0] == pair[0] && e[1] == pair[1]),
            "missing edge {pair:?}"
        );
    }
    assert_eq!(report["cared_edges"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "example.json", EXAMPLE);
    let a = run(&["moralize", input.to_str().unwrap()]);
    let b = run(&["moralize", input.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "--n", "4", "--exhaustive", "--seed", "3"]);
    let d = run(&["verify", "--n", "4", "--exhaustive", "--seed", "3"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn chordal_emits_verifiable_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(
        dir.path(),
        "c4.json",
        r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[0,3]]}"#,
    );
    let out = run(&["chordal", "--graph", square.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let hole: Vec<u32> = report["hole"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as u32)
        .collect();
    let g = SimpleGraph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    assert!(Hole::new(&g, &hole).is_ok());

    let input = write(dir.path(), "example.json", EXAMPLE);
    let out = run(&["chordal", input.to_str().unwrap(), "--which", "p"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let order: Vec<u32> = report["elimination_ordering"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as u32)
        .collect();
    let doc: DigraphDocument = serde_json::from_str(EXAMPLE).unwrap();
    let d = doc.to_digraph().unwrap();
    let p = phylograph::phylogeny_graph(&d).unwrap();
    assert!(verify_elimination_ordering(&p, &order));
}

#[test]
fn holes_subcommand_lists_underlying_squares() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "example.json", EXAMPLE);
    let out = run(&["holes", input.to_str().unwrap(), "--which", "u"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["count"], 3);
}

#[test]
fn verify_passes_on_small_sweeps() {
    let out = run(&["verify", "--n", "5", "--exhaustive", "--checks", "all"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["digraphs_checked"], 430);
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["failures"], 0);
    }
}

#[test]
fn verify_jobs_flag_does_not_change_output() {
    let a = run(&["verify", "--n", "5", "--exhaustive", "--jobs", "1"]);
    let b = run(&["verify", "--n", "5", "--exhaustive", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let c = binary()
        .env("PHYLOGRAPH_JOBS", "2")
        .args(["verify", "--n", "5", "--exhaustive"])
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn verify_writes_replayable_counterexamples() {
    // Chordal sufficiency fails once the degree bounds are loosened.
    let dir = tempfile::tempdir().unwrap();
    let replay = dir.path().join("replay.jsonl");
    let out = run(&[
        "verify",
        "--n",
        "6",
        "--exhaustive",
        "--bounds",
        "3,3",
        "--checks",
        "chordal_suff",
        "--replay",
        replay.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let lines = std::fs::read_to_string(&replay).unwrap();
    let mut replayed = 0;
    for line in lines.lines() {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["check"], "chordal_suff");
        let doc: DigraphDocument = serde_json::from_value(record["digraph"].clone()).unwrap();
        let d = doc.to_digraph().unwrap();
        // The embedded digraph reproduces the failure.
        let u = d.underlying_graph();
        let p = phylograph::phylogeny_graph(&d).unwrap();
        assert!(phylograph::is_chordal_bool(&u));
        assert!(!phylograph::is_chordal_bool(&p));
        replayed += 1;
    }
    assert_eq!(replayed, 1);
}

#[test]
fn scan_flags_forbidden_patterns() {
    let dir = tempfile::tempdir().unwrap();
    // Single-sink orientation of the six-cycle: a catalog pattern.
    let pattern = write(
        dir.path(),
        "pattern.json",
        r#"{"n":6,"arcs":[[0,1],[2,1],[3,2],[4,3],[5,4],[0,5]]}"#,
    );
    let out = run(&["scan", pattern.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["matches"].as_array().unwrap().len(), 1);
    assert_eq!(report["matches"][0]["kind"], "six_cycle_catalog");

    let example = write(dir.path(), "example.json", EXAMPLE);
    let out = run(&["scan", example.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn phi_reports_the_hole_map() {
    let dir = tempfile::tempdir().unwrap();
    // Acyclic orientation of the 5-cycle: one hole in P, one in U.
    let input = write(
        dir.path(),
        "path5.json",
        r#"{"n":5,"arcs":[[0,1],[1,2],[2,3],[3,4],[0,4]]}"#,
    );
    let out = run(&["phi", input.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["holes_p"].as_array().unwrap().len(), 1);
    assert_eq!(report["holes_u"].as_array().unwrap().len(), 1);
    assert_eq!(report["injective"], true);
    assert_eq!(report["count_ok"], true);
    assert_eq!(report["map"][0]["image"].as_array().unwrap().len(), 5);
}

#[test]
fn census_counts_match() {
    for (k, want) in [(4, 3), (5, 3), (6, 8)] {
        let out = run(&["census", "--k", &k.to_string()]);
        assert!(out.status.success());
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["count"], want);
    }
}

#[test]
fn dot_export_styles_cared_edges() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "example.json", EXAMPLE);
    let out = run(&["moralize", input.to_str().unwrap(), "--dot"]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph P {"));
    assert_eq!(dot.matches("style=\"dashed\"").count(), 2);
}

#[test]
fn malformed_input_exits_two_naming_the_record() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"n":2,"arcs":[[0,1],[0,7]]}"#);
    let out = run(&["moralize", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("arc 1"), "{stderr}");

    let worse = write(dir.path(), "worse.json", "not json");
    let out = run(&["moralize", worse.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn document_round_trip_over_corpus() {
    for seed in 0..50u64 {
        let d = phylograph::random_digraph(6, &phylograph::DegreeBounds::TWO_TWO, seed);
        let doc = DigraphDocument::from_digraph(&d);
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let back: DigraphDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_digraph().unwrap(), d);
    }
    let _ = Digraph::new(1, &[]).unwrap();
}
