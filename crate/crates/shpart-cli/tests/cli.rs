use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn shpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shpart"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shpart-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> String {
    let p = scratch(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn construct_families() {
    let v = json(&shpart(&[
        "construct",
        "nw",
        "--q",
        "3",
        "--d",
        "3",
        "--k",
        "1",
    ]));
    assert_eq!(v["terms"], 3);
    assert_eq!(v["polynomial"], "x1*x4*x7 + x2*x5*x8 + x3*x6*x9");

    let v = json(&shpart(&[
        "construct",
        "word",
        "--h",
        "2",
        "--d",
        "4",
        "--k",
        "2",
    ]));
    assert_eq!(v["nvars"], 16);
    assert_eq!(v["word"]["word"], serde_json::json!([-2, 2, -2, 2]));

    let v = json(&shpart(&["construct", "imm", "--n", "2", "--d", "2"]));
    assert_eq!(v["terms"], 2);
}

#[test]
fn construct_writes_files() {
    let out = scratch("nw.txt");
    let v = json(&shpart(&[
        "construct",
        "nw",
        "--q",
        "2",
        "--d",
        "2",
        "--k",
        "1",
        "--output",
        out.to_str().unwrap(),
    ]));
    assert_eq!(fs::read_to_string(&out).unwrap().trim(), "x1*x3 + x2*x4");
    let side: Value =
        serde_json::from_str(&fs::read_to_string(v["sidecar"].as_str().unwrap()).unwrap()).unwrap();
    assert_eq!(side["q"], 2);
}

#[test]
fn measures() {
    let p = write("cube.txt", "x1*x2*x3\n");
    let v = json(&shpart(&[
        "measure",
        &p,
        "--measure",
        "sp",
        "--k",
        "1",
        "--l",
        "0",
    ]));
    assert_eq!(v["dimension"], 3);

    let q = write("four.txt", "x1*x2*x3*x4\n");
    for y in ["1", "1,2", "2,3,4", "1,2,3,4"] {
        for k in 0..=2 {
            let v = json(&shpart(&[
                "measure",
                &q,
                "--measure",
                "skewp",
                "--k",
                &k.to_string(),
                "--y",
                y,
            ]));
            assert!(v["dimension"].as_u64().unwrap() <= 1, "y={y} k={k}");
        }
    }

    let z = write("zero.txt", "0\n");
    let v = json(&shpart(&[
        "measure",
        &z,
        "--measure",
        "pd",
        "--k",
        "1",
        "--nvars",
        "3",
    ]));
    assert_eq!(v["dimension"], 0);
}

#[test]
fn trees_and_sequences() {
    let v = json(&shpart(&["canon", "((L,L),L)"]));
    assert_eq!(v["canonical"], "(L,(L,L))");
    let v = json(&shpart(&["degseq", "((L,L),(L,L))"]));
    assert_eq!(v["degrees"], serde_json::json!([2, 1, 1]));
    let v = json(&shpart(&["uptk", "--degrees", "1,1,1"]));
    assert_eq!(v["k"], 0);
    let v = json(&shpart(&["residue", "--k", "2", "--degrees", "1,1,1,1"]));
    assert_eq!(v["residue"]["value"], "1");
}

const CATERPILLAR: &str = r#"{"nvars":3,"root":4,"nodes":[
  {"id":0,"op":"in","var":1},{"id":1,"op":"in","var":2},{"id":2,"op":"in","var":3},
  {"id":3,"op":"mul","children":[{"id":0,"coeff":"1"},{"id":1,"coeff":"1"}]},
  {"id":4,"op":"mul","children":[{"id":3,"coeff":"1"},{"id":2,"coeff":"2"}]}]}"#;

// x1·x2 + 3·x2·x3 − x1·x3: three product gates under one sum
const SIGMA_PI: &str = r#"{"nvars":3,"root":9,"nodes":[
  {"id":0,"op":"in","var":1},{"id":1,"op":"in","var":2},{"id":2,"op":"mul","children":[{"id":0,"coeff":"1"},{"id":1,"coeff":"1"}]},
  {"id":3,"op":"in","var":2},{"id":4,"op":"in","var":3},{"id":5,"op":"mul","children":[{"id":3,"coeff":"1"},{"id":4,"coeff":"1"}]},
  {"id":6,"op":"in","var":1},{"id":7,"op":"in","var":3},{"id":8,"op":"mul","children":[{"id":6,"coeff":"1"},{"id":7,"coeff":"1"}]},
  {"id":9,"op":"add","children":[{"id":2,"coeff":"1"},{"id":5,"coeff":"3"},{"id":8,"coeff":"-1"}]}]}"#;

#[test]
fn decompositions() {
    let cat = write("cat.json", CATERPILLAR);
    let v = json(&shpart(&["decompose", &cat, "--mode", "upt"]));
    assert_eq!(v["recombination"], "exact");
    for s in v["summands"].as_array().unwrap() {
        assert_eq!(s["degrees"], serde_json::json!([1, 1, 1]));
    }
    let v = json(&shpart(&["check-upt", &cat]));
    assert_eq!(v["upt"], true);

    let sp = write("sp.json", SIGMA_PI);
    let v = json(&shpart(&["decompose", &sp, "--mode", "lowdepth"]));
    assert_eq!(v["s"], 3);
    assert_eq!(v["recombination"], "exact");
}

#[test]
fn verify_exit_codes() {
    let out = shpart(&["verify", "residue", "--scale", "small"]);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["failures"].as_array().unwrap().len(), 0);

    assert_eq!(shpart(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(shpart(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        shpart(&["construct", "nw", "--q", "4", "--d", "3", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_trees_is_deterministic() {
    let a = shpart(&["verify", "trees", "--seed", "7"]);
    let b = shpart(&["verify", "trees", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweeps() {
    let spec = write(
        "nw.json",
        r#"{"family":"nw","grids":{"q":[2,3],"d":[3,4],"k":[1,2]},"measures":["pd"],"seed":5}"#,
    );
    let out = scratch("nw.csv");
    let o = out.to_str().unwrap();
    assert!(shpart(&["sweep", &spec, "--output", o]).status.success());
    let first = fs::read_to_string(&out).unwrap();
    assert_eq!(first.lines().count(), 9);
    assert!(shpart(&["sweep", &spec, "--output", o]).status.success());
    assert_eq!(fs::read_to_string(&out).unwrap(), first);

    let empty = write(
        "empty.json",
        r#"{"family":"imm","grids":{"n":[],"d":[2]},"measures":["pd"]}"#,
    );
    let o = shpart(&["sweep", &empty, "--output", "-"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1);

    let bad = write("bad.json", r#"{"family":"imm","grids":{}}"#);
    assert_eq!(shpart(&["sweep", &bad]).status.code(), Some(2));
}
