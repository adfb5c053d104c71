use std::process::Command;

fn fbl(args: &[&str], workers: &str) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fbl")).args(args).env("FBL_WORKERS", workers).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn norm_report_is_identical_across_worker_counts() {
    let args = ["norm", "--lattice", "chain:3", "--expr", "(minus (delta a1) (scale 1/2 (delta M)))", "--seed", "42", "--json"];
    let (s1, one) = fbl(&args, "1");
    let (s4, four) = fbl(&args, "4");
    assert_eq!((s1, s4), (0, 0));
    assert_eq!(one, four);
    let v: serde_json::Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["seed"], 42);
    assert!(v["result"]["lattice_estimate"]["witness"]["points"].is_array());
}

#[test]
fn order_unit_example() {
    let (status, text) =
        fbl(&["norm", "--lattice", "chain:2", "--expr", "(vee (abs (delta m)) (abs (delta M)))", "--seed", "42", "--json"], "2");
    assert_eq!(status, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["result"]["lower"].as_f64().unwrap() - 2.0).abs() <= 1e-9);
    assert_eq!(v["result"]["upper"].as_f64().unwrap(), 2.0);
}

#[test]
fn exit_codes() {
    assert_eq!(fbl(&["verify", "--suite", "all", "--seed", "7"], "1").0, 0);
    assert_eq!(fbl(&["norm", "--lattice", "bogus", "--expr", "(delta m)"], "1").0, 2);
    assert_eq!(fbl(&["bfree", "--n", "21"], "1").0, 2);
    assert_eq!(fbl(&["bfree", "--n", "3"], "zero").0, 2);
}

#[test]
fn lattice_from_json_file() {
    let dir = std::env::temp_dir().join(format!("fbl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("l.json");
    std::fs::write(&path, r#"{"elements": ["m", "a", "b", "M"], "leq": [[0, 1], [0, 2], [1, 3], [2, 3]]}"#).unwrap();
    let (status, text) = fbl(&["homs", "--lattice", path.to_str().unwrap(), "--two-valued", "--json"], "1");
    assert_eq!(status, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["result"]["count"], 4);
    std::fs::remove_dir_all(&dir).unwrap();
}
