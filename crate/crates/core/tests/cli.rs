use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let path = if name.starts_with("running") {
        root.join("automata").join(name)
    } else {
        root.join("tests/data").join(name)
    };
    path.to_string_lossy().into_owned()
}

fn maxplus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxplus"))
        .args(args)
        .env_remove("MAXPLUS_CAP_SEMIGROUP")
        .env_remove("MAXPLUS_CAP_SUBSET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_running_example_both_ways() {
    let (a, b) = (fixture("running_a.json"), fixture("running_b.json"));
    for method in ["exhaustive", "tractable"] {
        let o = maxplus(&["check", &a, &b, "--method", method]);
        assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
        assert!(stdout(&o).starts_with("NotBigO"));
        let o = maxplus(&["check", &b, &a, "--method", method]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("c = "));
    }
    let o = maxplus(&["check", &a, &a]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_prints_counterexamples_and_json() {
    let (a, b) = (fixture("running_a.json"), fixture("running_b.json"));
    let o = maxplus(&["check", &a, &b, "--counterexample", "2", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "NotBigO");
    assert_eq!(v["refutation"]["kind"], "witness");
    let family = v["counterexamples"].as_array().unwrap();
    assert_eq!(family.len(), 2);
    for (i, x) in family.iter().enumerate() {
        let s = (i + 1) as u64;
        let fa: u64 = x["f_a"].as_str().unwrap().parse().unwrap();
        let fb: u64 = x["f_b"].as_str().unwrap().parse().unwrap();
        assert!(fa > s * fb + s);
    }
    // Deterministic output.
    let again = maxplus(&["check", &a, &b, "--counterexample", "2", "--json"]);
    assert_eq!(o.stdout, again.stdout);

    let o = maxplus(&["check", &b, &a, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "BigO");
    assert!(v["certificate"]["constant"].is_string());
}

#[test]
fn eval_words() {
    let (a, b) = (fixture("running_a.json"), fixture("running_b.json"));
    let w = "(a b a^20 b)^81";
    assert_eq!(stdout(&maxplus(&["eval", &a, w])).trim(), (81 * 23).to_string());
    assert_eq!(stdout(&maxplus(&["eval", &b, w])).trim(), "162");
    assert_eq!(stdout(&maxplus(&["eval", &a, ""])).trim(), "0");
    let o = maxplus(&["eval", &a, "a c"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn tree_rendering() {
    let (a, b) = (fixture("running_a.json"), fixture("running_b.json"));
    let o = maxplus(&["tree", &a, &b, "a^2 b"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAULT"));
    let o = maxplus(&["tree", &a, &b, "a"]);
    let out = stdout(&o);
    assert!(out.starts_with("height 0, 1 nodes"), "{out}");
    let o = maxplus(&["tree", &a, &b, "(a^3 b a^3 b)^3"]);
    assert!(stdout(&o).contains("FAULT"));
    let o = maxplus(&["tree", &a, &b, "(a^3 b a^3 b)^3", "--dot"]);
    let out = stdout(&o);
    assert!(out.starts_with("digraph") && out.contains("red"));
}

#[test]
fn closure_statistics_and_caps() {
    let (a, b) = (fixture("running_a.json"), fixture("running_b.json"));
    let out = stdout(&maxplus(&["closure", &a, &b]));
    assert!(out.contains("generators: 2"), "{out}");
    let u = fixture("unary_zero.json");
    let out = stdout(&maxplus(&["closure", &u, &u]));
    assert!(out.contains("paths (S-bar): 1"), "{out}");

    let o = Command::new(env!("CARGO_BIN_EXE_maxplus"))
        .args(["closure", &a, &b])
        .env("MAXPLUS_CAP_SEMIGROUP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains('3'));
}

#[test]
fn usage_errors() {
    assert_eq!(maxplus(&[]).status.code(), Some(2));
    assert_eq!(maxplus(&["check", "/nonexistent.json", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(maxplus(&["--help"]).status.code(), Some(0));
}
