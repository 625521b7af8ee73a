use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

fn polyapprox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyapprox"))
        .args(args)
        .env_remove("POLYAPPROX_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json record")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polyapprox-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn hexagon_deviation_is_exact() {
    let out = polyapprox(&[
        "deviation",
        "--dim",
        "2",
        "--kind",
        "delta",
        "--j",
        "2",
        "--body",
        "ball",
        "--other",
        "regular-polygon:6:inscribed",
        "--seed",
        "1",
    ]);
    let r = json(&out);
    let value = r["result"]["value"].as_f64().unwrap();
    assert!((value - (PI - 1.5 * 3f64.sqrt())).abs() < 1e-12, "{value}");
    assert_eq!(r["config"]["seed"], 1);
    assert_eq!(r["config"]["command"], "deviation");
}

#[test]
fn caps_violate_the_triangle_inequality() {
    let r = json(&polyapprox(&["counterexample", "--dim", "2", "--j", "1", "--eps", "0.1", "--seed", "5"]));
    assert_eq!(r["result"]["violated"], true);
    assert!(r["result"]["rhs"].as_f64().unwrap() > r["result"]["lhs"].as_f64().unwrap());
}

#[test]
fn replay_reproduces_records_byte_for_byte() {
    let runs: [&[&str]; 3] = [
        &["deviation", "--dim", "3", "--kind", "sigma", "--body", "cube:0.7", "--other", "ball", "--samples", "2000"],
        &["random-limit", "--dim", "2", "--N", "10,20", "--trials", "30", "--csv"],
        &["optimize", "--dim", "2", "--N", "5", "--j", "2", "--restarts", "2", "--steps", "200"],
    ];
    for (k, args) in runs.iter().enumerate() {
        let first = polyapprox(args);
        assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
        let saved = scratch(&format!("record-{k}"));
        std::fs::write(&saved, &first.stdout).unwrap();
        let again = polyapprox(&["replay", saved.to_str().unwrap()]);
        assert!(again.status.success(), "{}", String::from_utf8_lossy(&again.stderr));
        assert_eq!(first.stdout, again.stdout, "run {k}");
    }
}

#[test]
fn seeds_come_from_the_flag_the_environment_or_entropy() {
    let given = json(&polyapprox(&["estimate", "--body", "cube:0.5", "--dim", "3", "--j", "1", "--seed", "42"]));
    assert_eq!(given["config"]["seed"], 42);

    let env = Command::new(env!("CARGO_BIN_EXE_polyapprox"))
        .args(["estimate", "--body", "cube:0.5", "--dim", "3", "--j", "1"])
        .env("POLYAPPROX_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&env), given);

    let fresh = polyapprox(&["estimate", "--body", "cube:0.5", "--dim", "3", "--j", "1"]);
    let stderr = String::from_utf8_lossy(&fresh.stderr);
    let printed: u64 = stderr.trim().strip_prefix("seed: ").expect("seed is printed").parse().unwrap();
    assert_eq!(json(&fresh)["config"]["seed"], printed);
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["random-limit", "--dim", "3", "--j", "2", "--N", "10,20", "--trials", "30", "--seed", "3"];
    let one = polyapprox(&[&args[..], &["--threads", "1"]].concat());
    let four = polyapprox(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn disc_triangle_covers_the_default_grid() {
    let out = polyapprox(&["disc-triangle", "--samples", "0", "--csv", "--seed", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 391);
    let h = |row: &str| row.split(',').next().unwrap().parse::<f64>().unwrap();
    assert_eq!((h(rows[0]), h(rows[390])), (-0.9, 3.0));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| polyapprox(args).status.code().unwrap();
    assert_eq!(code(&["constants", "--dim", "3", "--bogus"]), 2);
    assert_eq!(code(&["estimate", "--body", "torus:1", "--dim", "3", "--seed", "0"]), 2);
    assert_eq!(code(&["estimate", "--body", "ball", "--dim", "3", "--csv", "--seed", "0"]), 2);
    assert_eq!(code(&["counterexample", "--dim", "2", "--j", "2", "--eps", "0.1", "--seed", "0"]), 2);
    // valid input on which the rejection sampler cannot make progress
    let stall = [
        "random-limit",
        "--dim",
        "2",
        "--j",
        "1",
        "--N",
        "10,20",
        "--trials",
        "30",
        "--body",
        "ellipsoid:1000,0.001",
        "--density",
        "optimal",
        "--seed",
        "1",
    ];
    let out = polyapprox(&stall);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
    assert_eq!(code(&["constants", "--dim", "4", "--seed", "0"]), 0);
}

#[test]
fn verify_passes_on_a_small_run() {
    let r = json(&polyapprox(&["verify", "--dim", "30", "--count", "5", "--seed", "2"]));
    assert_eq!(r["result"]["passed"], true);
}
