use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superhilb")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn ring_file(text: &str) -> tempfile_path::Path {
    tempfile_path::Path::new(text)
}

// a scratch file removed on drop
mod tempfile_path {
    pub struct Path(std::path::PathBuf);

    impl Path {
        pub fn new(text: &str) -> Path {
            use std::sync::atomic::{AtomicUsize, Ordering};
            static N: AtomicUsize = AtomicUsize::new(0);
            let name = format!("superhilb-cli-{}-{}.txt", std::process::id(), N.fetch_add(1, Ordering::SeqCst));
            let p = std::env::temp_dir().join(name);
            std::fs::write(&p, text).unwrap();
            Path(p)
        }

        pub fn as_str(&self) -> &str {
            self.0.to_str().unwrap()
        }
    }

    impl Drop for Path {
        fn drop(&mut self) {
            let _ = std::fs::remove_file(&self.0);
        }
    }
}

#[test]
fn reduce_high_power_to_zero() {
    let v = json(&["reduce", "--p", "2", "--q", "1", "x^3"]);
    assert_eq!(v["vector"]["even"], serde_json::json!(["0", "0"]));
    assert_eq!(v["vector"]["odd"], serde_json::json!(["0"]));
    assert_eq!(v["member"], true);
}

#[test]
fn reduce_generator_is_a_member() {
    let ring = ring_file("even a; odd alpha;");
    let v = json(&[
        "reduce", "--p", "1", "--q", "1", "--ring", ring.as_str(), "--param", "b0=a", "--param", "beta0=alpha", "x + a + alpha*theta",
    ]);
    assert_eq!(v["member"], true);
    assert_eq!(v["cofactor_f"], "1");
}

#[test]
fn reduce_from_generator_file() {
    let ring = ring_file("even a;");
    let ideal = ring_file("f=x^2 + a\ng=x*theta\n");
    let v = json(&["reduce", "--p", "2", "--q", "1", "--ring", ring.as_str(), "--ideal", ideal.as_str(), "x^2*theta + x^3"]);
    assert_eq!(v["vector"]["even"], serde_json::json!(["0", "- a"]));
    assert_eq!(v["vector"]["odd"], serde_json::json!(["0"]));
}

#[test]
fn malformed_poly_exits_2_with_position() {
    let out = run(&["reduce", "--p", "2", "--q", "1", "x^3 +* 2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:6"));
}

#[test]
fn rank_order_violation_exits_3() {
    assert_eq!(run(&["reduce", "--p", "1", "--q", "2", "x"]).status.code(), Some(3));
    assert_eq!(run(&["strata", "--p", "1", "--q", "2"]).status.code(), Some(3));
}

#[test]
fn strata_reports() {
    let v = json(&["strata", "--p", "2", "--q", "1"]);
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);
    assert_eq!(v["dimension"], serde_json::json!([2, 2]));
    let v = json(&["strata", "--p", "1", "--q", "0"]);
    assert!(v["generators"].as_array().unwrap().is_empty());
    assert_eq!(v["dimension"], serde_json::json!([1, 1]));
}

#[test]
fn transitions_match_closed_forms() {
    for pair in ["12", "13"] {
        let v = json(&["transition", "--k", "2", "--pair", pair]);
        assert_eq!(v["closed_form"], "MATCH", "pair {pair}");
        assert_eq!(v["cocycle"], true);
    }
    let v = json(&["transition", "--k", "2", "--pair", "13"]);
    assert_eq!(v["rules"]["a2"], "c2^-1");
    let v = json(&["transition", "--k", "0", "--pair", "23"]);
    assert_eq!(v["closed_form"], "none");
    assert_eq!(v["cocycle"], true);
    assert_eq!(run(&["transition", "--k", "0", "--pair", "15"]).status.code(), Some(2));
}

#[test]
fn split_check_hilb11() {
    let v = json(&["split-check", "--target", "hilb11", "--k", "4"]);
    assert_eq!(v, serde_json::json!({"k": 4, "split": true, "target": "hilb11", "twist": -2}));
}

#[test]
fn split_check_hilb21_nonzero_k() {
    let v = json(&["split-check", "--target", "hilb21", "--k", "3"]);
    assert_eq!(v["split"], false);
    assert_eq!(v["case"], "I");
    assert_eq!(v["degrees"], serde_json::json!([0, -4]));
    assert!(!v["trace"].as_array().unwrap().is_empty());
    let v = json(&["split-check", "--target", "hilb21", "--k", "-2"]);
    assert_eq!((v["split"].clone(), v["case"].clone()), (Value::Bool(false), Value::from("II")));
}

#[test]
fn split_check_hilb21_zero_k_is_a_coboundary() {
    let v = json(&["split-check", "--target", "hilb21", "--k", "0"]);
    assert_eq!(v["case"], "III");
    assert_eq!(v["split"], true);
    let trace = v["trace"].as_array().unwrap();
    assert!(trace.last().unwrap().as_str().unwrap().contains("f=0 and c=-1"));
}

#[test]
fn k_range_is_ascending_and_deterministic() {
    let args = ["split-check", "--target", "hilb21", "--k-range", "-2..2", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let ks: Vec<i64> = v.as_array().unwrap().iter().map(|r| r["k"].as_i64().unwrap()).collect();
    assert_eq!(ks, [-2, -1, 0, 1, 2]);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.find("\"case\"").unwrap() < text.find("\"degrees\"").unwrap());
    assert_eq!(run(&["split-check", "--target", "hilb21", "--k-range", "3..1"]).status.code(), Some(2));
}

#[test]
fn degree_bound_flag() {
    let v = json(&["split-check", "--target", "hilb21", "--k", "1", "--degree-bound", "0"]);
    assert_eq!(v["split"], false);
}
