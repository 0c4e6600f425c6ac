use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_endotrace")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "additivity", "--seed", "42", "--cases", "100", "--json", "r.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS additivity"));
    let r: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(r["properties"][0]["passed"], 100);
    assert_eq!(r["config"]["seed"], 42);
}

#[test]
fn fnvn_honors_caps() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "fnvn", "--cases", "30", "--caps", "rank=4,k=2,len=3,bound=6,frob=6"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn injected_fault_exits_one_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--suite", "equivariance", "--seed", "3", "--cases", "40", "--inject-fault", "skip-rotation-merge", "--json", "r.json"];
    let o = run(&args, dir.path());
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let c = &r["properties"][0]["counterexample"];
    assert!(c["blueprint"].is_object() && c["original"].is_object());
    assert!(c["message"].as_str().unwrap().contains('ς'));
    assert_eq!(r["fault"], "skip-rotation-merge");

    // The counterexample is reproducible.
    let first = fs::read(dir.path().join("r.json")).unwrap();
    run(&args, dir.path());
    assert_eq!(fs::read(dir.path().join("r.json")).unwrap(), first);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), r#"{"kind": "endo"}"#).unwrap();
    fs::write(dir.path().join("junk.json"), "not json").unwrap();
    fs::write(dir.path().join("w.json"), r#"{"N": 3, "coeffs": [1]}"#).unwrap();
    for args in [
        vec!["trace", "--in", "bad.json"],
        vec!["trace", "--in", "junk.json"],
        vec!["trace", "--in", "missing.json"],
        vec!["verify", "--suite", "no-such-suite"],
        vec!["verify", "--caps", "rank=0"],
        vec!["witt", "mul", "--a", "w.json"],
        vec!["witt", "frob", "--a", "w.json", "-n", "0"],
        vec!["frobenius"],
    ] {
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn witt_and_ghost_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    // ch of the 1×1 matrix 2 is the geometric series in 2t.
    fs::write(p.join("m.json"), r#"{"matrix": [[2]]}"#).unwrap();
    let o = run(&["ch", "--matrix", "m.json", "--bound", "4", "--json", "w.json"], p);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ghost: 2, 4, 8, 16"));
    let o = run(&["witt", "versch", "--a", "w.json", "-n", "2", "--json", "v.json"], p);
    assert!(stdout(&o).contains("ghost: 0, 4, 0, 8"), "{}", stdout(&o));
    let o = run(&["ghost", "--witt", "v.json"], p);
    assert_eq!(stdout(&o).trim(), "ghost: 0, 4, 0, 8");
    let o = run(&["ghost", "--witt", "v.json", "--bound", "2"], p);
    assert_eq!(stdout(&o).trim(), "ghost: 0, 4");
    let o = run(&["witt", "frob", "--a", "w.json", "-n", "2"], p);
    assert!(stdout(&o).contains("ghost: 4, 16"));
    let o = run(&["witt", "add", "--a", "w.json", "--b", "v.json"], p);
    assert!(stdout(&o).contains("ghost: 2, 8, 8, 24"));
    let o = run(&["witt", "mul", "--a", "w.json", "--b", "v.json"], p);
    assert!(stdout(&o).contains("ghost: 0, 16, 0, 128"));
    let o = run(&["ghost", "--matrix", "m.json", "--bound", "3"], p);
    assert_eq!(stdout(&o).trim(), "ghost: 2, 4, 8");
}

#[test]
fn generated_objects_flow_through_the_operators() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let ok = |args: &[&str]| {
        let o = run(args, p);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    ok(&["generate", "--shape", "twisted-tuple", "-n", "3", "--seed", "5", "--out", "t.json"]);
    ok(&["generate", "--shape", "twisted-tuple", "-n", "3", "--seed", "5", "--out", "t2.json"]);
    assert_eq!(fs::read(p.join("t.json")).unwrap(), fs::read(p.join("t2.json")).unwrap());
    ok(&["verschiebung", "--in", "t.json", "-n", "3", "--out", "v.json"]);
    let traces = ok(&["trace", "--in", "v.json", "--bound", "6", "--json", "tr.json"]);
    assert_eq!(traces.lines().count(), 7);
    let seq: Value = serde_json::from_str(&fs::read_to_string(p.join("tr.json")).unwrap()).unwrap();
    assert_eq!(seq.as_array().unwrap().len(), 6);
    // V of a tuple only has traces at multiples of its length.
    for k in [0, 1, 3, 4] {
        let m = &seq[k]["matrix"];
        assert!(m.as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).all(|x| x == 0), "tr_{}", k + 1);
    }
    ok(&["generate", "--shape", "commutative-endo", "--seed", "1", "--out", "e.json"]);
    ok(&["frobenius", "--in", "e.json", "-n", "2", "--out", "f.json"]);
    ok(&["trace", "--in", "f.json"]);
    ok(&["generate", "--shape", "exact-sequence", "--seed", "2", "--out", "x.json"]);
    ok(&["trace", "--in", "x.json"]);
    let o = run(&["verschiebung", "--in", "t.json", "-n", "2", "--out", "bad.json"], p);
    assert_eq!(o.status.code(), Some(2));
}
