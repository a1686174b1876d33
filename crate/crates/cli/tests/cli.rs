use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("segal-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn segal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segal")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn level_sizes(file: &Path) -> Vec<usize> {
    let v: Value = serde_json::from_str(&fs::read_to_string(file).unwrap()).unwrap();
    v["levels"].as_array().unwrap().iter().map(|l| l.as_array().unwrap().len()).collect()
}

fn build(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path(&out)]);
    let o = segal(&full);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn build_level_sizes() {
    let d = workdir("sizes");
    assert_eq!(level_sizes(&build(&d, "s.json", &["simplex", "-n", "2", "-N", "3"])), [3, 6, 10, 15]);
    assert_eq!(level_sizes(&build(&d, "z2.json", &["nerve", "--group", "Z2", "-N", "4"])), [1, 2, 4, 8, 16]);
    assert_eq!(level_sizes(&build(&d, "p.json", &["pentagon-nerve", "--group", "Z2", "-N", "4"])), [1, 1, 2, 4, 8]);
}

#[test]
fn every_build_kind_roundtrips() {
    let d = workdir("kinds");
    fs::write(d.join("graph.json"), r#"{"vertices": ["a", "b", "c"], "edges": [["f", "a", "b"], ["g", "b", "c"]]}"#).unwrap();
    fs::write(
        d.join("poset.json"),
        r#"{"labels": ["0", "1", "2"], "less_equal": [["0", "1"], ["1", "2"]], "shift": ["1", "2", "2"]}"#,
    )
    .unwrap();
    let z2 = build(&d, "z2.json", &["nerve", "--group", "Z2", "-N", "3"]);
    let delta = build(&d, "delta.json", &["simplex", "-n", "1", "-N", "3"]);
    let sizes = level_sizes(&delta);
    let perms: Vec<Vec<usize>> = sizes.iter().map(|&n| (0..n).collect()).collect();
    fs::write(d.join("action.json"), serde_json::json!({"identity": 0, "perms": [perms]}).to_string()).unwrap();
    let files = [
        build(&d, "cyc.json", &["cyclic-nerve", "--group", "S3", "-N", "3"]),
        build(&d, "cycp.json", &["cyclic-nerve", "--poset", path(&d.join("poset.json")), "-N", "3"]),
        build(&d, "bld.json", &["building", "--chain", "3,1", "-N", "3"]),
        build(&d, "graph-x.json", &["graph", "--input", path(&d.join("graph.json")), "-N", "3"]),
        build(&d, "susp.json", &["suspension", "--input", path(&z2), "--side", "right"]),
        build(&d, "prod.json", &["product", "--input", path(&z2), "--input", path(&delta)]),
        build(&d, "quot.json", &["quotient", "--input", path(&delta), "--action", path(&d.join("action.json"))]),
        build(&d, "rand.json", &["nerve", "--random-objects", "3", "--seed", "9", "-N", "3"]),
    ];
    assert_eq!(level_sizes(&files[6]), sizes);
    for f in &files {
        let again = d.join("again.json");
        let o = segal(&["build", "suspension", "--input", path(f), "--out", path(&again)]);
        assert_eq!(code(&o), 0, "{}: {}", f.display(), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn check_exit_codes() {
    let d = workdir("check");
    let z2 = build(&d, "z2.json", &["nerve", "--group", "Z2", "-N", "4"]);
    assert_eq!(code(&segal(&["check", path(&z2), "2segal"])), 0);
    assert_eq!(code(&segal(&["check", path(&z2), "2segal", "--strategy", "boundary", "--up-to", "3"])), 0);
    assert_eq!(code(&segal(&["check", path(&z2), "unital"])), 0);

    fs::write(d.join("graph.json"), r#"{"vertices": ["a", "b", "c"], "edges": [["f", "a", "b"], ["g", "b", "c"]]}"#).unwrap();
    let g = build(&d, "g.json", &["graph", "--input", path(&d.join("graph.json")), "-N", "3"]);
    let o = segal(&["check", path(&g), "1segal"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["witnesses"][0]["level"], 2);

    let report = d.join("report.json");
    assert_eq!(code(&segal(&["check", path(&z2), "crosscheck", "--out", path(&report)])), 0);
    let r: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["agree"], true);
    assert_eq!(r["two_segal"]["holds"], true);

    fs::write(d.join("bad.json"), "{not json").unwrap();
    assert_eq!(code(&segal(&["check", path(&d.join("bad.json")), "2segal"])), 2);
    assert_eq!(code(&segal(&["check", path(&d.join("missing.json")), "2segal"])), 2);
    assert_eq!(code(&segal(&["check", path(&z2), "2segal", "--up-to", "9"])), 2);
    assert_eq!(code(&segal(&["check", path(&z2), "3segal"])), 2);
}

#[test]
fn invalid_builds_are_refused() {
    let d = workdir("refuse");
    fs::write(d.join("poset.json"), r#"{"labels": ["0", "1"], "less_equal": [["0", "1"]], "shift": ["1", "0"]}"#).unwrap();
    let o = segal(&["build", "building", "--poset", path(&d.join("poset.json"))]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("order-preserving"));
    assert!(!d.join("out.json").exists());
    assert_eq!(code(&segal(&["build", "nerve", "--group", "Z8", "-N", "6", "--max-simplices", "1000"])), 2);
    assert_eq!(code(&segal(&["build", "nerve", "--group", "W3"])), 2);
}

fn products(table: &Value) -> Vec<(String, String, String, String)> {
    table["products"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            let s = |k: &str| p[k].as_str().unwrap().to_string();
            (s("left"), s("right"), s("result"), s("coefficient"))
        })
        .collect()
}

#[test]
fn algebra_tables() {
    let o = segal(&["algebra", "hecke", "S3", "S2"]);
    assert_eq!(code(&o), 0);
    let t: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(t["basis"].as_array().unwrap().len(), 2);
    let ps = products(&t);
    let pairs: std::collections::BTreeSet<_> = ps.iter().map(|p| (p.0.clone(), p.1.clone())).collect();
    assert_eq!(pairs.len(), 4);

    let o = segal(&["algebra", "oracle-hall", "fq", "--q", "2", "--bound", "3"]);
    assert_eq!(code(&o), 0);
    let t: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(products(&t["table"]).contains(&("e01".into(), "e01".into(), "e02".into(), "3".into())));

    let o = segal(&["algebra", "factorization", "Z2", "--w", "1"]);
    assert_eq!(code(&o), 0);
    let t: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(t["basis"].as_array().unwrap().len(), 2);

    let csv = segal(&["algebra", "hecke", "D4", "0321", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("left,right,result,coefficient\n"));

    let d = workdir("algebra");
    let z3 = build(&d, "z3.json", &["nerve", "--group", "Z3", "-N", "4"]);
    let o = segal(&["algebra", "hall", "--input", path(&z3)]);
    assert_eq!(code(&o), 0);
    let t: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(t["basis"].as_array().unwrap().len(), 3);

    assert_eq!(code(&segal(&["algebra", "hecke", "S3", "9"])), 2);
}

#[test]
fn manifests_reproduce_bit_identical_outputs() {
    let d = workdir("run");
    let manifest = |name: &str, out: &str| {
        let m = serde_json::json!({
            "command": "build",
            "parameters": {"kind": "nerve", "random_objects": 4, "level": 3},
            "seed": 42,
            "outputs": [out],
        });
        let p = d.join(name);
        fs::write(&p, m.to_string()).unwrap();
        p
    };
    let a = manifest("a.json", "first.json");
    let b = manifest("b.json", "second.json");
    assert_eq!(code(&segal(&["run", path(&a)])), 0);
    assert_eq!(code(&segal(&["run", path(&b)])), 0);
    let first = fs::read(d.join("first.json")).unwrap();
    assert_eq!(first, fs::read(d.join("second.json")).unwrap());

    let check = serde_json::json!({
        "command": "check",
        "parameters": {"property": "2segal", "up_to": 3, "strategy": "all"},
        "inputs": ["first.json"],
        "outputs": ["verdict.json"],
    });
    fs::write(d.join("c.json"), check.to_string()).unwrap();
    assert_eq!(code(&segal(&["run", path(&d.join("c.json"))])), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(d.join("verdict.json")).unwrap()).unwrap();
    assert_eq!(v["holds"], true);

    fs::write(d.join("broken.json"), r#"{"command": "build", "bogus": 1}"#).unwrap();
    assert_eq!(code(&segal(&["run", path(&d.join("broken.json"))])), 2);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_segal"))
            .args(["algebra", "hecke", "S4", "S3", "--format", "csv"])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}
