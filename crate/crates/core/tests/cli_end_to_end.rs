//! The endorank binary: exit codes, output stability, poset export, cache.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn endorank(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_endorank"));
    cmd.args(args).env_remove("ENDORANK_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("ENDORANK_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn classify_examples() {
    let o =
        endorank(&["classify", "--family", "A2", "--twist", "1", "--isogeny", "ad", "--q", "4", "--ell", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["tf_rank"], 3);
    assert_eq!(v["rule"], "odd/PGL");
    let o = endorank(&["classify", "--family", "D4", "--twist", "3", "--q", "5", "--ell", "3"], None);
    assert_eq!((o.status.code(), json(&o)["tf_rank"].clone()), (Some(0), Value::from(2)));
    let o = endorank(&["classify", "--family", "A1", "--isogeny", "sc", "--q", "7", "--ell", "7"], None);
    assert_eq!((o.status.code(), json(&o)["tf_rank"].clone()), (Some(0), Value::from(0)));
}

#[test]
fn classify_inline_descriptor() {
    let d = r#"{"family": "A2", "twist": 2, "q": 8, "associated": "psl"}"#;
    let o = endorank(&["classify", "--descriptor", d, "--ell", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["tf_rank"], 4);
}

#[test]
fn classify_caveat_and_error_codes() {
    let o =
        endorank(&["classify", "--family", "A2", "--twist", "2", "--isogeny", "ad", "--q", "2", "--ell", "3"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(json(&o)["tf_rank"].is_null());
    let o = endorank(&["classify", "--family", "A1", "--q", "2", "--ell", "7"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn rank_examples() {
    for (g, n, q, ell, want) in [("PGL", "3", "4", "3", 3), ("PSL", "2", "7", "2", 2), ("SL", "2", "5", "2", 0)] {
        let o = endorank(&["rank", "--group", g, "--n", n, "--q", q, "--ell", ell], None);
        assert_eq!(o.status.code(), Some(0), "{g}_{n}({q})");
        let v = json(&o);
        assert_eq!(v["report"]["tf_rank"], want, "{g}_{n}({q})");
        assert_eq!(v["schema"], "endorank.rank-run/1");
    }
}

#[test]
fn rank_json_is_byte_identical() {
    let args = ["rank", "--group", "SU", "--n", "3", "--q", "5", "--ell", "5", "--seed", "7"];
    let a = endorank(&args, None);
    let b = endorank(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 7);
}

#[test]
fn rank_over_budget_is_unknown() {
    let o = endorank(&["rank", "--group", "PGL", "--n", "3", "--q", "4", "--ell", "3", "--orbit-budget", "10"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(json(&o)["report"]["tf_rank"].is_null());
}

#[test]
fn rank_exports_poset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("poset.json");
    let o = endorank(
        &[
            "rank",
            "--group",
            "PSp",
            "--n",
            "4",
            "--q",
            "3",
            "--ell",
            "3",
            "--format",
            "dot",
            "--export-poset",
            path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.contains("digraph orbit_poset"));
    let poset: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(poset["schema"], "endorank.orbit-poset/1");
    assert_eq!(poset["components"].as_array().unwrap().len(), 1);
}

#[test]
fn rank_text_header_records_budgets() {
    let o = endorank(
        &["rank", "--group", "PGL", "--n", "2", "--q", "5", "--ell", "2", "--format", "text", "--seed", "3"],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.contains("seed 3") && first.contains("orbit"), "{first}");
    assert!(text.contains("tf_rank 2"));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["rank", "--group", "SL", "--n", "3", "--q", "3", "--ell", "3"];
    let a = endorank(&args, Some(dir.path()));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let b = endorank(&args, Some(dir.path()));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["report"]["tf_rank"], 3);
}

fn write_grid(dir: &Path, entries: &str) -> String {
    let path = dir.join("grid.json");
    std::fs::write(&path, format!(r#"{{"schema": "endorank.grid/1", "entries": [{entries}]}}"#)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn crosscheck_wrong_expectation_fails() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_grid(
        dir.path(),
        r#"{"group": {"family": "GL", "n": 3, "q": 4, "quotient": "all-scalars"}, "ell": 3, "expected": 2}"#,
    );
    let o = endorank(&["crosscheck", &grid], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stdout).unwrap().contains("NO"));
}

#[test]
fn crosscheck_over_budget_row_is_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_grid(
        dir.path(),
        r#"{"group": {"family": "GL", "n": 3, "q": 4, "quotient": "all-scalars"}, "ell": 3, "expected": "derive",
            "budgets": {"enumeration_bound": 200000, "orbit_budget": 10}}"#,
    );
    let o = endorank(&["crosscheck", &grid, "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let row = &v["rows"][0];
    assert_eq!(row["brute"]["kind"], "unknown", "{row}");
    assert_eq!(row["classify"]["kind"], "rank");
    assert_eq!(row["classify"]["value"], 3);
    assert_eq!(v["mismatches"], 0);
}

#[test]
fn crosscheck_rejects_bad_grid() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_grid(
        dir.path(),
        r#"{"group": {"family": "SL", "n": 2, "q": 5}, "ell": 2, "expected": 0,
            "budgets": {"enumeration_bound": 0, "orbit_budget": 10}}"#,
    );
    assert_eq!(endorank(&["crosscheck", &grid], None).status.code(), Some(1));
}

#[test]
fn witness_examples() {
    let o = endorank(&["witness", "--variant", "gl", "--ell", "3", "--q", "4"], None);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["subgroups"].as_array().unwrap().len(), 3);
    let o = endorank(&["witness", "--variant", "sl", "--ell", "3", "--q", "7"], None);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["scalars"]["mu"], "5");
    let failing: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["holds"] != true).collect();
    assert!(failing.is_empty(), "{failing:?}");
    let o = endorank(&["witness", "--variant", "defchar", "--p", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["scalars"]["maximal_in_U"], "4");
}

#[test]
fn threads_flag_is_accepted() {
    let o = endorank(&["--threads", "1", "rank", "--group", "PSL", "--n", "2", "--q", "9", "--ell", "2"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["report"]["tf_rank"], 2);
}
