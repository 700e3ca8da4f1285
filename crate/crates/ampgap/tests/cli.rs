//! Integration tests for the `ampgap` binary: exit codes, CSV output,
//! reproducibility, config-file precedence.

use std::path::PathBuf;
use std::process::{Command, Output};

fn ampgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ampgap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ampgap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn estimate_prints_one_csv_row_and_recovers_amplitude() {
    let out = ampgap(&[
        "estimate",
        "--protocol",
        "glsae",
        "--a",
        "0.5",
        "--epsilon",
        "1e-3",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.trim().lines().collect();
    assert_eq!(rows.len(), 1, "expected exactly one CSV row, got {text:?}");
    let fields: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(fields.len(), 14);
    assert_eq!(fields[0], "glsae");
    assert_eq!(fields[1], "0.5");
    let a_hat: f64 = fields[2].parse().unwrap();
    assert!((a_hat - 0.5).abs() <= 1e-3, "a_hat = {a_hat}");
}

#[test]
fn estimate_rejects_out_of_range_amplitude() {
    let out = ampgap(&[
        "estimate",
        "--protocol",
        "glsae",
        "--a",
        "1.5",
        "--epsilon",
        "1e-2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--a"), "stderr: {}", stderr(&out));
}

#[test]
fn estimate_depth_respects_width_override() {
    let out = ampgap(&[
        "estimate",
        "--protocol",
        "gdmae",
        "--a",
        "0.001",
        "--epsilon",
        "1e-2",
        "--T",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let fields: Vec<&str> = text.trim().split(',').collect();
    let depth: u64 = fields[9].parse().unwrap();
    assert!(depth <= 32, "depth {depth} exceeds M = 32");
}

#[test]
fn estimate_output_is_byte_identical_across_runs() {
    let args = [
        "estimate",
        "--protocol",
        "gmmae",
        "--a",
        "0.37",
        "--epsilon",
        "5e-3",
        "--seed",
        "99",
    ];
    let first = ampgap(&args);
    let second = ampgap(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn verify_passes_on_default_dimensions() {
    let out = ampgap(&["verify", "--dims", "2,4,8,16", "--seeds", "5"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("ok: worst deviation"));
}

#[test]
fn verify_rejects_dimensions_beyond_cap() {
    let out = ampgap(&["verify", "--dims", "128"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--dims"));
}

#[test]
fn verify_handles_zero_evolution_length() {
    let out = ampgap(&["verify", "--dims", "4", "--seeds", "2", "--t-max", "0"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}

#[test]
fn sweep_rejects_malformed_plan_file() {
    let path = temp_path("broken.plan");
    std::fs::write(&path, "trials = 20\nthis line has no separator\n").unwrap();
    let out = ampgap(&["sweep", "--plan", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains(":2"), "parse location missing: {err}");
}

#[test]
fn sweep_rejects_unknown_plan_keys() {
    let path = temp_path("unknown.plan");
    std::fs::write(&path, "no-such-key = 1\n").unwrap();
    let out = ampgap(&["sweep", "--plan", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no-such-key"));
}

#[test]
fn sweep_plan_file_drives_the_run_and_flags_override_it() {
    let plan = temp_path("small.plan");
    let csv_a = temp_path("sweep-a.csv");
    std::fs::write(
        &plan,
        format!(
            "protocols = glsae\na-values = 0.3\nepsilons = 0.05, 0.02\ntrials = 10\n\
             seed = 11\nout = {}\n",
            csv_a.display()
        ),
    )
    .unwrap();
    let out = ampgap(&["sweep", "--plan", plan.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let written = std::fs::read_to_string(&csv_a).unwrap();
    assert!(written.starts_with("protocol,a_true,epsilon,beta,trial,seed,a_hat"));
    // 1 protocol x 1 amplitude x 2 epsilons x 10 trials + header
    assert_eq!(written.trim().lines().count(), 21);

    // An explicit flag beats the plan entry.
    let csv_b = temp_path("sweep-b.csv");
    let out = ampgap(&[
        "sweep",
        "--plan",
        plan.to_str().unwrap(),
        "--out",
        csv_b.to_str().unwrap(),
        "--trials",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let written = std::fs::read_to_string(&csv_b).unwrap();
    assert_eq!(written.trim().lines().count(), 25);
}

#[test]
fn invariance_reports_rmse_ratio() {
    let csv = temp_path("invariance.csv");
    let out = ampgap(&[
        "invariance",
        "--budget",
        "1e5",
        "--splits",
        "3",
        "--depth-min",
        "20",
        "--depth-max",
        "60",
        "--a",
        "0.25",
        "--trials",
        "20",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("max/min rmse ratio"), "stdout: {text}");
    let written = std::fs::read_to_string(&csv).unwrap();
    assert!(written.starts_with("split_depth,split_queries,product,rmse,trials"));
    assert_eq!(written.trim().lines().count(), 4);
}

#[test]
fn audit_prints_per_property_lines() {
    let out = ampgap(&["audit"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("phi convexity"));
    assert!(text.contains("psi 2T^2-smoothness"));
    assert!(text.lines().filter(|l| l.starts_with("pass")).count() >= 20);
}

#[test]
fn config_file_fills_defaults_without_beating_flags() {
    let config = temp_path("estimate.conf");
    std::fs::write(
        &config,
        "protocol = glsae\na = 0.5\nepsilon = 1e-2\nseed = 4\n",
    )
    .unwrap();
    // Config supplies everything.
    let base = ampgap(&["--config", config.to_str().unwrap(), "estimate"]);
    assert_eq!(base.status.code(), Some(0), "stderr: {}", stderr(&base));
    let base_fields: Vec<String> = stdout(&base).trim().split(',').map(String::from).collect();
    assert_eq!(base_fields[1], "0.5");
    assert_eq!(base_fields[12], "4");
    // Explicit flag overrides the config value.
    let out = ampgap(&[
        "--config",
        config.to_str().unwrap(),
        "estimate",
        "--a",
        "0.25",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let fields: Vec<String> = stdout(&out).trim().split(',').map(String::from).collect();
    assert_eq!(fields[1], "0.25");
}

#[test]
fn config_file_with_unknown_key_is_a_usage_error() {
    let config = temp_path("bad.conf");
    std::fs::write(&config, "bogus = 1\n").unwrap();
    let out = ampgap(&[
        "--config",
        config.to_str().unwrap(),
        "estimate",
        "--protocol",
        "glsae",
        "--a",
        "0.5",
        "--epsilon",
        "1e-2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bogus"));
}

#[test]
fn unknown_flags_are_rejected() {
    let out = ampgap(&[
        "estimate",
        "--protocol",
        "glsae",
        "--a",
        "0.5",
        "--epsilon",
        "1e-2",
        "--frobnicate",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_lists_flags_with_defaults() {
    for sub in ["estimate", "verify", "sweep", "invariance", "audit"] {
        let out = ampgap(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        assert!(text.contains("--help"), "{sub} help missing flags");
        if sub != "audit" {
            assert!(text.contains("default"), "{sub} help shows no defaults");
        }
    }
}

#[test]
fn out_dir_environment_variable_prefixes_relative_outputs() {
    let dir = temp_path("outdir-root");
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ampgap"))
        .env("AMPGAP_OUT_DIR", &dir)
        .args([
            "invariance",
            "--budget",
            "1e4",
            "--splits",
            "1",
            "--depth-min",
            "20",
            "--depth-max",
            "20",
            "--trials",
            "5",
            "--out",
            "nested/run.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(dir.join("nested/run.csv").exists());
}
