use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use liftwalk::graph::{make_petersen, parse_graph, serialize_graph};

fn liftwalk(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liftwalk"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Data lines of a CSV, skipping `#` comments.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn lift_writes_tower_and_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let out = liftwalk(&["lift", "--base", "complete:4", "--levels", "2"], dir.path());
    assert!(out.status.success());
    let csv = read(&dir.path().join("tower.csv"));
    assert!(csv.starts_with("# liftwalk "));
    let table = rows(&csv);
    assert_eq!(table[0][..3], ["level", "vertices", "edges"]);
    assert_eq!(table[3][..4], ["2", "48", "144", "6"]);
    let level2 = parse_graph(&read(&dir.path().join("level_2.edges"))).unwrap();
    assert_eq!((level2.n(), level2.m()), (48, 144));
}

#[test]
fn bipartite_base_reports_two_components() {
    let dir = tempfile::tempdir().unwrap();
    assert!(liftwalk(&["lift", "--base", "cycle:4", "--levels", "1"], dir.path()).status.success());
    let table = rows(&read(&dir.path().join("tower.csv")));
    assert_eq!(table[2][6], "2");
}

#[test]
fn budget_exit_code_keeps_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let out = liftwalk(&["lift", "--base", "complete:4", "--levels", "5", "--budget", "1000"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let table = rows(&read(&dir.path().join("tower.csv")));
    // Levels 0-3 built, 4-5 predicted.
    assert_eq!(table.len(), 7);
    assert_eq!(table[5][..3], ["4", "2880", "25920"]);
    assert_eq!(table[6][..3], ["5", "51840", "881280"]);
    assert_eq!(table[6][7], "true");
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(liftwalk(&["lift", "--base", "tree:3"], dir.path()).status.code(), Some(2));
    assert_eq!(liftwalk(&["walk", "--steps", "1"], dir.path()).status.code(), Some(2));
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "levels = many\n").unwrap();
    let out = liftwalk(&["lift", "--config", conf.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn walk_budget_requires_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["walk", "--base", "rr:4,20,3", "--levels", "2", "--walk-budget", "100", "--steps", "50"];
    assert_eq!(liftwalk(&args, dir.path()).status.code(), Some(3));
    let mut sampled = args.to_vec();
    sampled.extend(["--sample", "60"]);
    let out = liftwalk(&sampled, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir.path().join("walk_level_2.csv"));
    assert!(csv.contains("n=60 start=0 sampled=true"));
    let series = rows(&csv);
    assert_eq!(series[0], ["t", "p_return"]);
    assert_eq!(series.len(), 51);
    let p: Vec<f64> = series[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(p[0], 1.0);
    assert!(p.iter().any(|&x| x < 0.5), "series should not be flat");
}

#[test]
fn walk_stats_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = liftwalk(&["walk", "--base", "complete:4", "--levels", "0"], dir.path());
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&read(&dir.path().join("walk_stats.json"))).unwrap();
    assert_eq!(json["meta"]["version"], env!("CARGO_PKG_VERSION"));
    let level = &json["levels"][0];
    for key in ["mean", "peak", "peak_time", "std", "revival_peak", "revival_time", "t_min"] {
        assert!(level.get(key).is_some(), "{key}");
    }
    assert!((level["mean"].as_f64().unwrap() - 0.633).abs() < 0.02);
    assert_eq!(level["steps"], 400);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "base = petersen\nlevels = 2\nk = 3\n").unwrap();
    let c = conf.to_str().unwrap();
    let a = dir.path().join("a");
    assert!(liftwalk(&["structural", "--config", c], &a).status.success());
    let table = rows(&read(&a.join("structural.csv")));
    assert_eq!(table.len(), 4);
    assert_eq!(table[1][..3], ["0", "10", "15"]);
    let b = dir.path().join("b");
    assert!(liftwalk(&["structural", "--config", c, "--levels", "1"], &b).status.success());
    assert_eq!(rows(&read(&b.join("structural.csv"))).len(), 3);
    // The hash covers every setting.
    let header = |p: &Path| read(p).lines().next().unwrap().to_owned();
    assert_ne!(header(&a.join("structural.csv")), header(&b.join("structural.csv")));
}

#[test]
fn spectrum_verification_and_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let out = liftwalk(&["spectrum", "--base", "petersen", "--levels", "2", "--verify-rule"], dir.path());
    assert!(out.status.success());
    let checks = rows(&read(&dir.path().join("spectrum_verify.csv")));
    assert_eq!(checks.len(), 3);
    assert!(checks[1..].iter().all(|r| r[1] == "d-2" && r[4] == "true"));

    let out = liftwalk(
        &["spectrum", "--base", "complete:4", "--levels", "1", "--predict-levels", "2"],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = read(&dir.path().join("spectrum.csv"));
    assert!(csv.contains("# source: 0=dense 1=dense 2=predicted 3=predicted"));
    let table = rows(&csv);
    assert_eq!(table[4][1], "10;8;6;4;2;0;-2");
}

#[test]
fn spectrum_of_irregular_level_over_cutoff_is_a_budget_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = liftwalk(
        &["spectrum", "--base", "er:30,0.2,1", "--levels", "1", "--dense-cutoff", "40"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn coherence_table_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = liftwalk(&["coherence", "--base", "complete:4", "--levels", "1"], dir.path());
    assert!(out.status.success());
    let table = rows(&read(&dir.path().join("coherence.csv")));
    assert_eq!(
        table[0],
        ["Lift", "Nodes", "IPR", "Purity", "Rel. Entropy", "Mean Return", "Peak", "Std Dev"]
    );
    assert_eq!(table[1][3], "0.16");
    assert_eq!(table[2][3], "0.2");
    let json: serde_json::Value = serde_json::from_str(&read(&dir.path().join("coherence.json"))).unwrap();
    assert_eq!(json["rows"][0]["basis_sensitive"], true);
    assert_eq!(json["meta"]["config"]["trace_mode"], "paper");
}

#[test]
fn file_base_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("petersen.txt");
    fs::write(&graph, serialize_graph(&make_petersen())).unwrap();
    let base = format!("file:{}", graph.display());
    let out = liftwalk(&["report", "--base", &base, "--levels", "1"], &dir.path().join("out"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let md = read(&dir.path().join("out/report.md"));
    for section in ["## Tower", "## Distinct eigenvalues", "## Structure", "## Coherence", "## Walks"] {
        assert!(md.contains(section), "{section}");
    }
    assert!(md.contains("{3, 1, -2}"));
}
