use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kuramoto_trees::io::{read_tree, rearrangement_from_str, tree_to_string};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn ktree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktree")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn critical_on_small_fixtures() {
    let o = ktree(&["critical", p(&fixture("pair.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("k_c: 0.500000\n"));

    let o = ktree(&["critical", p(&fixture("chain3.json"))]);
    let text = stdout(&o);
    assert!(text.contains("k_c: 0.666667"), "{text}");
    assert!(text.contains("argmax_edge: 1 2"));
    assert!(text.contains("0,1,0.333333"));
}

#[test]
fn critical_writes_report_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = ktree(&["critical", p(&fixture("binary15.json")), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for key in ["k_c", "argmax_edge", "edge_omegas", "diameter", "max_partition"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["edge_omegas"].as_array().unwrap().len(), 14);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"n\": 2,\n  \"edges\": [[0,1]\n}").unwrap();
    let o = ktree(&["critical", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let cycle = dir.path().join("cycle.json");
    std::fs::write(&cycle, "{\"n\":3,\"edges\":[[0,1],[1,2],[2,0]],\"freqs\":[0,1,2]}").unwrap();
    assert_eq!(ktree(&["critical", p(&cycle)]).status.code(), Some(3));

    assert_eq!(ktree(&["figures", "--id", "6", "--samples", "10"]).status.code(), Some(4));
    assert_eq!(ktree(&["montecarlo", "--family", "hexagon", "--n", "10"]).status.code(), Some(4));
    assert_eq!(ktree(&["critical", p(&fixture("pair.json")), "--bogus"]).status.code(), Some(4));
    assert_eq!(ktree(&["critical", p(&dir.path().join("missing.json"))]).status.code(), Some(4));
}

#[test]
fn simulate_around_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let chain = fixture("chain3.json");
    let k_c = 2.0 / 3.0;
    let traj = dir.path().join("traj.csv");
    let above = format!("{}", 1.05 * k_c);
    let o = ktree(&["simulate", p(&chain), "--k", &above, "--out", p(&traj)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("synchronized: true"));
    let csv = std::fs::read_to_string(&traj).unwrap();
    assert!(csv.starts_with("t,phi_0,phi_1,phi_2\n"));

    let below = format!("{}", 0.95 * k_c);
    assert!(stdout(&ktree(&["simulate", p(&chain), "--k", &below])).contains("synchronized: false"));
    assert!(stdout(&ktree(&["simulate", p(&chain), "--k", "0"])).contains("synchronized: false"));
}

#[test]
fn montecarlo_row_independent_of_workers() {
    let run = |w: &str| {
        let o = ktree(&["montecarlo", "--family", "star", "--n", "100", "--samples", "20000", "--workers", w]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let mut lines = one.lines();
    assert_eq!(lines.next(), Some("family,n,dist,samples,mean,stderr"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let mean: f64 = row[4].parse().unwrap();
    assert!((mean - 0.513).abs() < 0.01, "{mean}");
}

#[test]
fn montecarlo_chain_and_dumbbell() {
    for (family, target, tol) in [("chain", 2.352, 0.03), ("dumbbell", 1.221, 0.015)] {
        let o = ktree(&["montecarlo", "--family", family, "--n", "100", "--samples", "100000"]);
        let row = stdout(&o).lines().nth(1).unwrap().to_string();
        let mean: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
        assert!((mean - target).abs() < tol, "{family}: {mean}");
    }
}

#[test]
fn generate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("star.json");
    let o = ktree(&["generate", "--kind", "star", "--n", "60", "--seed", "7", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let tree = read_tree(&out).unwrap();
    assert_eq!(tree.n(), 60);
    assert_eq!(tree_to_string(&tree), text);

    let tad = dir.path().join("tadpole.json");
    ktree(&["generate", "--kind", "tadpole:8", "--n", "40", "--out", p(&tad)]);
    assert_eq!(read_tree(&tad).unwrap().diameter(), 8);

    let bin = dir.path().join("binary.json");
    ktree(&["generate", "--kind", "binary", "--n", "255", "--out", p(&bin)]);
    let t = read_tree(&bin).unwrap();
    assert_eq!(t.edges().len(), 254);
    assert_eq!(t.topology().height(0), 7);
}

#[test]
fn rearrange_documents() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = ktree(&["rearrange", p(&fixture("binary15.json")), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let doc = rearrangement_from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let w = read_tree(&fixture("binary15.json")).unwrap();
    let spread = w.freqs().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - w.freqs().iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(doc.k_c_after <= spread);
    assert_eq!(doc.bound, spread);

    let o = ktree(&["rearrange", p(&fixture("equal.json"))]);
    let doc = rearrangement_from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.k_c_after, 0.0);
}

#[test]
fn figures_write_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = ktree(&["figures", "--id", "11", "--samples", "200", "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("figure11_partition_log.csv")).unwrap();
    assert!(csv.starts_with("p_log_n_over_p,family,n,mean,stderr,partition_upper\n"));
    assert_eq!(csv.lines().count(), 36);
}
