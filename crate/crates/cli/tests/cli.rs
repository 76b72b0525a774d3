use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn ecw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecw")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn tmp_file(name: &str, body: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn modular_json_shape() {
    let out = ecw(&["modular", "--gen", "c4", "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["weight"], 4);
    assert_eq!(v["degree"], -8);
    let coeffs = v["coeffs"].as_array().unwrap();
    let nums: Vec<&str> = coeffs.iter().map(|c| c["num"].as_str().unwrap()).collect();
    assert_eq!(nums, ["1", "240", "2160", "6720"]);
    assert!(coeffs.iter().all(|c| c["den"] == "1"));
    let delta = json(&ecw(&["modular", "--gen", "delta", "--order", "4"]));
    assert_eq!(delta["coeffs"][3]["num"], "-1472");
    assert_eq!(delta["coeffs"][3]["exp"], 4);
}

#[test]
fn verify_suites_pass() {
    let out = ecw(&["verify", "--suite", "modular", "--order", "20", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v.get("timestamp").is_none() && v.get("wall_time_s").is_none());
    let out = ecw(&["verify", "--suite", "cubical", "--seed", "42", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], 42);
    assert!(v.get("timestamp").is_some());
    let out = ecw(&["verify", "--suite", "finite", "--group", "builtin:z4", "--cocycle", "zn:4,1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    // a zero threshold makes the numeric sigma checks fail
    let out = ecw(&["verify", "--suite", "theta", "--tol-sigma-cross", "0", "--deterministic"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
    let out = ecw(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
    assert_eq!(ecw(&["modular", "--gen", "c5", "--order", "3"]).status.code(), Some(2));
    assert_eq!(ecw(&["theta", "--fn", "sigma", "--tau", "0,-1", "--z", "0.1,0"]).status.code(), Some(2));
    assert_eq!(ecw(&["looijenga-check", "--group", "Spin", "--n", "2", "--shift", "1,0;0,0"]).status.code(), Some(2));
    assert_eq!(ecw(&["finite", "fq-check", "--group", "builtin:z4", "--cocycle", "zn:3,1"]).status.code(), Some(2));
}

#[test]
fn theta_and_euler() {
    let p = json(&ecw(&["theta", "--fn", "sigma", "--tau", "0,1", "--z", "0.1,0"]));
    let e = json(&ecw(&["theta", "--fn", "sigma", "--tau", "0,1", "--z", "0.1,0", "--method", "eisenstein"]));
    let pv = p["value"].as_array().unwrap();
    let ev = e["value"].as_array().unwrap();
    for i in 0..2 {
        assert!((pv[i].as_f64().unwrap() - ev[i].as_f64().unwrap()).abs() < 1e-9);
    }
    assert!(p["error_bound"].as_f64().is_some());
    let q = json(&ecw(&["theta", "qexp", "--fn", "witten", "--zorder", "4", "--qorder", "3"]));
    assert_eq!(q["table"][2]["coeffs"][0]["num"], "-1");
    assert_eq!(q["table"][2]["coeffs"][0]["den"], "24");
    let u = json(&ecw(&["euler", "--group", "SU", "--n", "2", "--tau", "0,1", "--z", "0.1,0;-0.1,0"]));
    assert_eq!(u["degree"], 4);
    assert_eq!(u["beta_power"], -2);
    assert_eq!(ecw(&["euler", "--group", "SU", "--n", "2", "--tau", "0,1", "--z", "0.1,0;0.1,0"]).status.code(), Some(2));
}

#[test]
fn looijenga_with_gram_file() {
    let gram = tmp_file("gram_a1.json", "[[2,-1],[-1,2]]");
    let out = ecw(&["looijenga-check", "--group", "SU", "--n", "2", "--gram", gram.to_str().unwrap(), "--shift", "1,-1;0,0", "--z", "0.13,0.04;-0.13,-0.04"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn finite_group_file() {
    // Z/2 x Z/2 as xor
    let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    let body = serde_json::json!({ "order": 4, "mul": table }).to_string();
    let f = tmp_file("v4.json", &body);
    let out = ecw(&["finite", "pairs", "--group", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], 16);
    let bad = tmp_file("bad.json", r#"{"order": 2, "mul": [[0,1],[0,1]]}"#);
    assert_eq!(ecw(&["finite", "pairs", "--group", bad.to_str().unwrap()]).status.code(), Some(2));
    let orbits = json(&ecw(&["finite", "devoto", "--group", "builtin:z3"]));
    let sizes: Vec<u64> = orbits["orbits"].as_array().unwrap().iter().map(|o| o["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [1, 8]);
}

#[test]
fn fgl_and_cubical() {
    let out = ecw(&["fgl", "--coordinate", "sigma", "--order", "4", "--qorder", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = ecw(&["cubical", "--tau", "0.1,1.1", "--samples", "20", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let a = ecw(&["cubical", "--tau", "0.1,1.1", "--samples", "20", "--seed", "7"]);
    assert_eq!(out.stdout, a.stdout);
}
