//! End-to-end tests of the binary: spec'd examples, output shape,
//! determinism, and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grover-walk"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .expect("stdout is utf-8")
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn stationary_oracle_columns_agree() {
    let out = run(&[
        "stationary",
        "--theta",
        "3.14159",
        "--case",
        "thm1+",
        "--alpha",
        "1,0",
        "--window",
        "32",
        "--output-format",
        "csv",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "x,value,oracle,absdiff");
    assert_eq!(lines.len(), 1 + 65, "one row per site in |x| <= 32");
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 4);
        let diff: f64 = cells[3].parse().expect("absdiff parses");
        assert!(diff < 1e-9, "oracle mismatch in row {line}");
    }
    let origin = lines.iter().find(|l| l.starts_with("0,")).expect("origin row");
    let mu0: f64 = origin.split(',').nth(1).unwrap().parse().unwrap();
    assert!((mu0 - 2.0).abs() < 1e-9, "mu(0) = {mu0}, want 2 for alpha = 1");
}

#[test]
fn eigen_pair_has_unit_modulus() {
    let out = run(&["eigen", "--theta", "3.14159", "--case", "ii-a"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(
        lines[0],
        "case,lambda_re,lambda_im,theta_s_re,theta_s_im,abs2_theta_s"
    );
    assert_eq!(lines.len(), 3, "two eigenvalue rows");
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0], "ii-a");
        let re: f64 = cells[1].parse().unwrap();
        let im: f64 = cells[2].parse().unwrap();
        assert!(((re * re + im * im).sqrt() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn eigen_quintic_case_lists_five_roots() {
    let out = run(&["eigen", "--theta", "2.5132741228718345", "--case", "i-a"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 6, "five root rows");
    assert!(lines[1].starts_with("i-a,-1.0000000000000000e0,"), "exact -1 first");
}

#[test]
fn simulate_emits_step_rows() {
    let final_only = run(&["simulate", "--steps", "4", "--window", "8"]);
    assert!(final_only.status.success());
    let lines = stdout_lines(&final_only);
    assert_eq!(lines[0], "x,value");
    assert_eq!(lines.len(), 1 + 9, "final interior is |x| <= 4");

    let all = run(&["simulate", "--steps", "4", "--window", "8", "--all-steps"]);
    assert!(all.status.success());
    let lines = stdout_lines(&all);
    assert_eq!(lines[0], "step,x,value");
    // Steps 0..=4 over shrinking interiors of 17, 15, 13, 11, 9 sites.
    assert_eq!(lines.len(), 1 + 17 + 15 + 13 + 11 + 9);
}

#[test]
fn json_output_is_self_describing() {
    let out = run(&["limits", "--window", "2", "--output-format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is valid json");
    assert!(doc["spec"].is_object());
    assert_eq!(doc["spec"]["command"], "limits");
    let rows = doc["rows"].as_array().expect("rows array");
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["x"].is_i64() && r["value"].is_number()));
    assert!(doc["invariants_checked"].as_array().is_some_and(|v| !v.is_empty()));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["stationary", "--theta", "2.0", "--case", "ii-a", "--alpha", "0.3,-0.4"]);
    let b = run(&["stationary", "--theta", "2.0", "--case", "ii-a", "--alpha", "0.3,-0.4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_passes_on_a_clean_build() {
    let out = run(&["verify"]);
    assert!(
        out.status.success(),
        "verify failed:\n{}\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 1 + 9, "nine criterion rows");
    assert!(lines[1..].iter().all(|l| l.split(',').nth(1) == Some("pass")));
}

#[test]
fn usage_and_parameter_errors_exit_2() {
    for args in [
        &["eigen", "--theta", "1.0", "--case", "bogus"] as &[&str],
        &["eigen", "--case", "i"],
        &["eigen", "--theta", "7.0", "--case", "i"],
        &["eigen", "--theta", "-1.0", "--case", "i"],
        &["stationary", "--theta", "0.5", "--case", "thm1+"],
        &["stationary", "--theta", "1.0", "--case", "ii-b", "--gamma", "1,0"],
        &["stationary", "--theta", "2.0", "--case", "i-a"],
        &["simulate", "--steps", "50", "--window", "10"],
        &["simulate", "--alpha", "nonsense"],
        &["unknown-subcommand"],
    ] {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {:?} should exit 2, stderr: {}",
            args,
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty(), "diagnostics belong on stderr");
    }
}

#[test]
fn half_turn_split_family_works_only_at_pi() {
    let ok = run(&[
        "stationary",
        "--theta",
        "3.141592653589793",
        "--case",
        "ii-b",
        "--alpha",
        "1,0",
        "--gamma",
        "0,1",
        "--window",
        "8",
    ]);
    assert!(ok.status.success(), "stderr: {}", String::from_utf8_lossy(&ok.stderr));
    let lines = stdout_lines(&ok);
    // mu(0) = 5/4(|a|^2+|g|^2) + Re(a conj(g))/2 = 5/2 here; tails are 6.
    let origin: f64 = lines
        .iter()
        .find(|l| l.starts_with("0,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((origin - 2.5).abs() < 1e-12);
    let tail: f64 = lines
        .iter()
        .find(|l| l.starts_with("5,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((tail - 6.0).abs() < 1e-12);

    let off = run(&[
        "stationary",
        "--theta",
        "2.0",
        "--case",
        "ii-b",
        "--alpha",
        "1,0",
        "--gamma",
        "0,1",
    ]);
    assert_eq!(off.status.code(), Some(2));
}
