//! CLI behavior: exit codes, diagnostics, file formats, the --sharp path.

use std::process::Command;

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jacobi2d"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = bin().args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn write_example(dir: &TempDir, name: &str, p1: usize, p2: usize) -> String {
    let path = dir.path().join(format!("{name}-{p1}x{p2}.json"));
    let r = run(&[
        "example",
        "--name",
        name,
        "--p1",
        &p1.to_string(),
        "--p2",
        &p2.to_string(),
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    path.to_str().unwrap().to_owned()
}

#[test]
fn example_then_validate_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = write_example(&dir, "shifted-schrodinger", 3, 3);
    let r = run(&["validate", "--input", &path]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("p1 = 3, p2 = 3"));
    assert!(r.stdout.contains("diagonal hopping (a0 = 0): yes"));
}

#[test]
fn validate_names_the_failed_invariant() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("small.json");
    // p1 = 2 in an otherwise well-formed file
    let text = r#"{"p1": 2, "p2": 3,
        "a0": [[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]],
        "a1": [[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]],
        "b0": [[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]],
        "b1": [[0,0,0],[0,0,0]]}"#;
    std::fs::write(&path, text).unwrap();
    let r = run(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("PeriodTooSmall"), "{}", r.stderr);
}

#[test]
fn complex_b1_exits_with_validation_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("complexb1.json");
    let text = r#"{"p1": 3, "p2": 3,
        "a0": [[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]],
        "a1": [[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]],
        "b0": [[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]],
        "b1": [[[1,2],0,0],[0,0,0],[0,0,0]]}"#;
    std::fs::write(&path, text).unwrap();
    let r = run(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("NonRealDiagonal"), "{}", r.stderr);
}

#[test]
fn unparseable_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "{not json").unwrap();
    let r = run(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);

    let missing = dir.path().join("missing.json");
    let r = run(&["validate", "--input", missing.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("cannot read"));
}

#[test]
fn bands_csv_format() {
    let dir = TempDir::new().unwrap();
    let path = write_example(&dir, "shifted-schrodinger", 3, 3);
    let r = run(&["bands", "--input", &path, "--grid", "4,2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "x,y,band,lambda");
    assert_eq!(lines.len(), 1 + 4 * 2 * 9);
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 4);
    }
}

#[test]
fn bands_json_format_carries_config() {
    let dir = TempDir::new().unwrap();
    let path = write_example(&dir, "diagonal-hopping", 3, 3);
    let r = run(&[
        "bands", "--input", &path, "--grid", "2,2", "--format", "json",
    ]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["config"]["command"], "bands");
    assert_eq!(v["config"]["grid"][0], 2);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2 * 2 * 9);
    assert!(v["config"]["input_sha256"].as_str().unwrap().len() == 64);
}

#[test]
fn envelope_report_shape() {
    let dir = TempDir::new().unwrap();
    let path = write_example(&dir, "shifted-schrodinger", 3, 3);
    let r = run(&["envelope", "--input", &path]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["lower"].as_array().unwrap().len(), 9);
    assert_eq!(v["upper"].as_array().unwrap().len(), 9);
    let sum = v["envelope_sum"].as_f64().unwrap();
    assert!((sum - 12.0).abs() < 1e-9);
}

#[test]
fn bounds_reports_null_schrodinger_for_nonzero_a0() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("generic.json");
    std::fs::write(
        &path,
        jacobi2d::CoefficientField::random(3, 3, 7).unwrap().to_json(),
    )
    .unwrap();
    let r = run(&["bounds", "--input", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "bounds is a report, not an error: {}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert!(v["schrodinger_bound"].is_null());
    assert_eq!(v["r_table"].as_array().unwrap().len(), 3);
}

#[test]
fn sharp_envelope_matches_r_min_of_original() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("field.json");
    let field = jacobi2d::CoefficientField::random(3, 3, 99).unwrap();
    std::fs::write(&path, field.to_json()).unwrap();

    let plain = run(&["bounds", "--input", path.to_str().unwrap()]);
    let v_plain: serde_json::Value = serde_json::from_str(&plain.stdout).unwrap();
    let r_min = v_plain["r_min"]["value"].as_f64().unwrap();

    let sharp = run(&["envelope", "--input", path.to_str().unwrap(), "--sharp"]);
    assert_eq!(sharp.code, 0);
    let v_sharp: serde_json::Value = serde_json::from_str(&sharp.stdout).unwrap();
    let sum = v_sharp["envelope_sum"].as_f64().unwrap();
    assert!(
        (sum - r_min).abs() <= 1e-9 * (1.0 + r_min),
        "sharp envelope sum {sum} vs r_min {r_min}"
    );
    assert!(v_sharp["config"]["sharp"]["alpha"].is_u64());
}

#[test]
fn verify_failure_exits_three() {
    // An enclosure tolerance of zero makes rounding-level excursions fail,
    // exercising the failure exit path deterministically.
    let dir = TempDir::new().unwrap();
    let path = write_example(&dir, "shifted-schrodinger", 3, 3);
    let r = run(&[
        "verify",
        "--input",
        &path,
        "--grid",
        "8,8",
        "--tol-enclosure",
        "0.0",
    ]);
    assert_eq!(r.code, 3, "stderr: {}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["enclosure_check"]["pass"], false);
    // the other checks still ran and passed
    assert_eq!(v["sandwich_check"]["pass"], true);
    assert_eq!(v["direct_integral_check"]["pass"], true);
}

#[test]
fn verify_embeds_full_config_echo() {
    let dir = TempDir::new().unwrap();
    let path = write_example(&dir, "diagonal-hopping", 3, 3);
    let r = run(&[
        "verify", "--input", &path, "--grid", "8,8", "--torus", "2,2", "--seed", "5",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let cfg = &v["config"];
    assert_eq!(cfg["grid"][0], 8);
    assert_eq!(cfg["torus"][1], 2);
    assert_eq!(cfg["seed"], 5);
    assert_eq!(cfg["samples"], 100);
    assert!(cfg["tol_psd"].as_f64().unwrap() > 0.0);
    assert!(cfg["input_sha256"].as_str().unwrap().len() == 64);
    assert_eq!(v["direct_integral_check"]["dimensions"]["torus"], 36);
}

#[test]
fn oversized_torus_exits_four() {
    let dir = TempDir::new().unwrap();
    let path = write_example(&dir, "shifted-schrodinger", 3, 3);
    // 3·30 × 3·30 = 8100 sites > 4096 cap
    let r = run(&["verify", "--input", &path, "--grid", "4,4", "--torus", "30,30"]);
    assert_eq!(r.code, 4, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("DimensionCap"), "{}", r.stderr);
}

#[test]
fn example_rejects_small_periods() {
    let r = run(&["example", "--name", "shifted-schrodinger", "--p1", "2", "--p2", "3"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("PeriodTooSmall"));
}
