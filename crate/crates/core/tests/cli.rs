//! End-to-end runs of the `vertexlie` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vertexlie")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

fn status_of(v: &Value, name: &str) -> String {
    v["results"].as_array().unwrap().iter().find(|r| r["name"] == name).map(|r| r["status"].to_string()).unwrap_or_default()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vertexlie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_virasoro() {
    let (code, v) = json(&["check", "--builtin", "virasoro"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "check");
    assert_eq!(v["algebra"], "virasoro");
    assert_eq!(status_of(&v, "skew"), "\"pass\"");
    assert_eq!(status_of(&v, "jacobi"), "\"pass\"");
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn modes_virasoro() {
    let out = run(&["modes", "--builtin", "virasoro", "--pairs", "L,L", "--window", "-4..4", "--expect-virasoro"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let (code, v) = json(&["modes", "--builtin", "virasoro", "--pairs", "L,L", "--window", "-1..1"]);
    assert_eq!(code, 0);
    let entries = v["results"][0]["value"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 9);
    // [L_{-1}, L_{1}] = -2 L_{0}, rationals as strings
    assert!(entries.contains(&serde_json::json!(["-1", "1", "-2*L_{0}"])), "{entries:?}");
}

#[test]
fn envelope_dims_heisenberg() {
    let (code, v) = json(&["envelope-dims", "--builtin", "heisenberg", "--set", "k=1", "--max-weight", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["value"]["dims"], serde_json::json!([1, 1, 2, 3, 5, 7, 11]));
    assert_eq!(v["params"]["k"], "1");
    let (code, _) = json(&["envelope-dims", "--builtin", "virasoro", "--max-weight", "4", "--expect", "1,0,1,1,3"]);
    assert_eq!(code, 1);
}

#[test]
fn json_is_deterministic() {
    let args = ["c2", "--builtin", "virasoro", "--max-weight", "6"];
    let (_, mut a) = json(&args);
    let (_, mut b) = json(&args);
    a["timing_ms"] = Value::Null;
    b["timing_ms"] = Value::Null;
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn exit_codes() {
    let bad = temp_file("bad.alg", "algebra v {\n  generator L : even, weight 2;\n  central c;\n  bracket L L = T L + 3 L l + 1/2 c l^(3);\n}\n");
    assert_eq!(run(&["check", "--algebra", bad.to_str().unwrap()]).status.code(), Some(1));
    let syntax = temp_file("syntax.alg", "algebra v { generator L : even, weight 2; bracket L = T L; }");
    let out = run(&["check", "--algebra", syntax.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:53"));
    assert_eq!(run(&["check", "--builtin", "nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["check"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--builtin", "virasoro", "--set", "c=1"]).status.code(), Some(2));
    assert_eq!(run(&["nproduct", "--builtin", "virasoro", "--a", "L_{", "--b", "L", "--n", "0"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn algebra_files_match_builtins() {
    let vir = temp_file(
        "vir.alg",
        "# the Virasoro algebra\nalgebra virasoro {\n  generator L : even, weight 2;\n  central c;\n  bracket L L = T L + 2 L l + 1/2 c l^(3);\n  set c = 1/2;\n}\n",
    );
    let path = vir.to_str().unwrap();
    let (code, v) = json(&["envelope-dims", "--algebra", path, "--max-weight", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["value"]["dims"], serde_json::json!([1, 0, 1, 1, 2, 2, 4, 4, 7]));
    let (code, _) = json(&["modes", "--algebra", path, "--expect-virasoro"]);
    assert_eq!(code, 0);
    // the file and the builtin agree as presentations
    let (code, _) = json(&["morphism", "--algebra", path, "--to-builtin", "virasoro", "--map", "L=L", "--map", "c=c"]);
    assert_eq!(code, 0);
}

#[test]
fn nproduct_and_verify() {
    let (code, v) = json(&["nproduct", "--builtin", "virasoro", "--a", "L", "--b", "L", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["value"]["result"], "1/2*c*|0>");
    let (code, v) = json(&["verify", "--builtin", "heisenberg", "--set", "k=1", "--max-weight", "2"]);
    assert_eq!(code, 0, "{v}");
    let (code, _) = json(&["verify", "--builtin", "virasoro", "--state", "L", "--state", "L_{-3}|0>", "--window", "-1..1"]);
    assert_eq!(code, 0);
}

#[test]
fn conformal_commands() {
    let (code, v) = json(&["chodos-thorn", "--builtin", "n2", "--j", "1/2 J", "--expect-charge", "0"]);
    assert_eq!(code, 0, "{v}");
    let (code, _) = json(&["chodos-thorn", "--builtin", "n2", "--j", "1/2 J", "--expect-charge", "c"]);
    assert_eq!(code, 1);
    let (code, v) = json(&["coset", "--builtin", "virasoro", "--builtin", "virasoro", "--l", "L1 + L2", "--sub", "L1"]);
    assert_eq!(code, 0);
    assert_eq!(v["algebra"], "virasoroxvirasoro");
    let coset = v["results"].as_array().unwrap().iter().find(|r| r["name"] == "coset").unwrap().clone();
    assert_eq!(coset["value"]["central_charge"], "c2");
    let (code, v) = json(&["check", "--builtin", "topological", "--conformal", "L"]);
    assert_eq!(code, 0, "{v}");
    let twist = [
        "morphism", "--builtin", "n2", "--to-builtin", "topological", "--map", "L=L - 1/2 T J", "--map", "Gp=2 Q",
        "--map", "Gm=G", "--map", "J=J", "--map", "c=3 d",
    ];
    assert_eq!(json(&twist).0, 0);
    let wrong = ["morphism", "--builtin", "n2", "--map", "Gp=Gm", "--map", "Gm=Gp", "--map", "J=J", "--map", "L=L", "--map", "c=c"];
    assert_eq!(json(&wrong).0, 1);
    assert_eq!(json(&["griess", "--builtin", "frobenius"]).0, 0);
}

#[test]
fn zhu_and_c2() {
    let (code, v) = json(&["zhu", "--builtin", "virasoro", "--max-weight", "3", "--central", "L", "--reduce", "L_{-3}|0> + 2 L"]);
    assert_eq!(code, 0, "{v}");
    let reduce = v["results"].as_array().unwrap().iter().find(|r| r["name"] == "zhu-reduce").unwrap().clone();
    // (T + H) L lies in O(V)
    assert_eq!(reduce["value"]["status"], "reduced");
    let (code, _) = json(&["zhu", "--builtin", "affine", "--param", "g=sl2", "--max-weight", "1", "--affine-degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(run(&["zhu", "--builtin", "neveu_schwarz"]).status.code(), Some(2));
    let (code, _) = json(&["c2", "--builtin", "virasoro", "--expect", "1,0,1,0,1,0,1", "--expect-commutative"]);
    assert_eq!(code, 0);
    assert_eq!(json(&["binomial-selftest", "--max", "8"]).0, 0);
}
