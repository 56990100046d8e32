use assert_cmd::Command;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::cargo_bin("covstat").unwrap().args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

#[test]
fn fix_series_of_a_generator() {
    let (code, v) = run(&["expect", "fix", "a", "--series", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["a_minus_1"], "0");
    assert_eq!(v["a_0"], "1");
}

#[test]
fn core_build_counts() {
    let (code, v) = run(&["core", "build", "aba^-2b^-1c"]);
    assert_eq!(code, 0);
    assert_eq!(v["vertices"], 12);
    assert_eq!(v["edges"], 14);
    assert_eq!(v["octagons"], 2);
}

#[test]
fn oracle_count_three() {
    let (code, v) = run(&["oracle", "count", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], "486");
}

#[test]
fn root_of_a_power() {
    let (_, v) = run(&["word", "root", "a^6"]);
    assert_eq!(v["exponent"], 6);
    assert_eq!(v["divisor_count"], 4);
    assert_eq!(v["root"], "a");
}

#[test]
fn exact_range_is_inclusive() {
    let (code, v) = run(&["expect", "fix", "a", "--n", "2..3"]);
    assert_eq!(code, 0);
    let rows = v["values"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!((rows[0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["expect", "fix", "a", "--series", "4", "--bogus"]).0, 1);
    assert_eq!(run(&["word", "root", "[a,b][c,d]"]).0, 2);
    assert_eq!(run(&["oracle", "count", "5"]).0, 2);
    assert_eq!(run(&["expect", "fix", "a", "--n", "2", "--series", "3"]).0, 2);
}

#[test]
fn export_round_trip() {
    let dir = std::env::temp_dir().join(format!("covstat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("core.json");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["core", "build", "[a,b]", "--out", p]).0, 0);
    let (_, before) = run(&["tiled", "canonical", p]);
    let (_, exported) = run(&["tiled", "export", p]);
    let again = dir.join("again.json");
    std::fs::write(&again, exported.to_string()).unwrap();
    let (_, after) = run(&["tiled", "canonical", again.to_str().unwrap()]);
    assert_eq!(before, after);
    assert_eq!(run(&["core", "verify", p]).0, 0);
    let (code, v) = run(&["expect", "subgroup", p, "--series", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["a_0"], "1");
    std::fs::remove_dir_all(&dir).ok();
}
