//! End-to-end tests of the binary surface: specification files run to
//! reports, laws round-trip through JSON, and the exit codes reflect the
//! outcomes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_roughlab"))
}

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
}

#[test]
fn run_family_fixture_reports_cluster() {
    let out = bin()
        .arg("run")
        .arg(spec_path("dyadic-family.rcl"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("cluster"), "{stdout}");
    assert!(stdout.contains("limit_point=no"), "{stdout}");
    assert!(stdout.contains("strong=yes"), "{stdout}");
}

#[test]
fn run_json_report_validates_against_schema() {
    let out = bin()
        .arg("run")
        .arg(spec_path("product-chain.rcl"))
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("valid JSON report");
    roughlab_cli::report::validate_report(&report).unwrap();
    assert_eq!(report["fatal"], serde_json::json!(false));
}

#[test]
fn parse_failure_exits_nonzero_with_diagnostics() {
    let dir = std::env::temp_dir().join("roughlab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.rcl");
    std::fs::write(
        &bad,
        "ideal density sequence { piece full { atom value 0 prob 1/2 atom value 1 prob 1/3 } }",
    )
    .unwrap();
    let out = bin().arg("run").arg(&bad).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mass 5/6 != 1"), "{stderr}");
}

#[test]
fn metric_subcommand_reads_law_json() {
    let dir = std::env::temp_dir().join("roughlab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let law = dir.join("law.json");
    std::fs::write(
        &law,
        r#"{"space":"real","atoms":[["1/10","1/2"],["9/10","1/2"]]}"#,
    )
    .unwrap();
    let out = bin().arg("metric").arg("--law").arg(&law).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1/2");

    // Two laws with the product coupling.
    let x = dir.join("x.json");
    let y = dir.join("y.json");
    std::fs::write(&x, r#"{"space":"real","atoms":[["0","1/2"],["1","1/2"]]}"#).unwrap();
    std::fs::write(&y, r#"{"space":"real","atoms":[["0","1"]]}"#).unwrap();
    let out = bin()
        .args(["metric", "--x"])
        .arg(&x)
        .arg("--y")
        .arg(&y)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1/2");
}

#[test]
fn density_and_ideal_member_subcommands() {
    let out = bin().args(["density", "dyadic(2)"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("exact 1/8"));

    let out = bin()
        .args(["density", "ap(4,1)", "--counting", "1000000"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("exact 1/4"));

    let out = bin()
        .args(["ideal-member", "powers(2)", "--ideal", "summable"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("in"));

    let out = bin()
        .args(["ideal-member", "ap(2,1)", "--ideal", "density", "--dual"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("not-in"), "{text}");
}

#[test]
fn check_and_cluster_subcommands() {
    let out = bin()
        .arg("check")
        .arg(spec_path("two-regime.rcl"))
        .args(["--r", "1/4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("Yes"));

    let out = bin()
        .arg("cluster")
        .arg(spec_path("odd-contrast.rcl"))
        .args(["--r", "1", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["delta_star_sup"], serde_json::json!("1/2"));
    assert_eq!(v["weak_cluster"]["answer"], serde_json::json!("yes"));
}

#[test]
fn sandwich_and_diameter_run_from_files() {
    let out = bin()
        .arg("sandwich")
        .arg(spec_path("product-chain.rcl"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("sandwich"));

    let out = bin()
        .arg("diameter")
        .arg(spec_path("two-regime.rcl"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("max rho = 1/2"));
}

#[test]
fn mc_check_is_seed_deterministic() {
    let run = |seed: &str| {
        let out = bin()
            .args([
                "mc-check",
                "--seed",
                seed,
                "--samples",
                "500",
                "--indices",
                "1,2,3",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{out:?}");
        String::from_utf8_lossy(&out.stdout).to_string()
    };
    let a = run("42");
    let b = run("42");
    assert_eq!(a, b);
    let c = run("43");
    assert_ne!(a, c);
    assert!(a.starts_with("n,estimate,sigma,exact,pass"));
}

#[test]
fn mc_check_env_seed_override() {
    let out = bin()
        .args(["mc-check", "--samples", "200", "--indices", "1,2"])
        .env("ROUGHLAB_SEED", "777")
        .output()
        .unwrap();
    let with_env = String::from_utf8_lossy(&out.stdout).to_string();
    let out = bin()
        .args([
            "mc-check", "--seed", "777", "--samples", "200", "--indices", "1,2",
        ])
        .output()
        .unwrap();
    let with_flag = String::from_utf8_lossy(&out.stdout).to_string();
    assert_eq!(with_env, with_flag);
}

#[test]
fn reproduce_single_entry_and_unknown_id() {
    let out = bin().args(["reproduce", "ex3.5"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));

    let out = bin().args(["reproduce", "nope"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn reproduce_all_is_deterministic_and_green() {
    let run = || {
        let out = bin().args(["reproduce", "--all"]).output().unwrap();
        assert!(out.status.success());
        String::from_utf8_lossy(&out.stdout).to_string()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b, "reproduction output must be order-stable");
    assert!(!a.contains("FAIL"));
}

#[test]
fn empty_query_document_runs_clean() {
    let dir = std::env::temp_dir().join("roughlab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("empty.rcl");
    std::fs::write(&f, "ideal fin\nsequence { piece full { atom value 0 prob 1 } }\n").unwrap();
    let out = bin().arg("run").arg(&f).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("no queries"));
    // JSON form still validates with zero probes.
    let out = bin().arg("run").arg(&f).arg("--json").output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    roughlab_cli::report::validate_report(&v).unwrap();
    assert_eq!(v["probes"].as_array().unwrap().len(), 0);
}

#[test]
fn metric_with_explicit_joint_coupling_file() {
    let dir = std::env::temp_dir().join("roughlab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let x = dir.join("jx.json");
    let y = dir.join("jy.json");
    let c = dir.join("jc.json");
    std::fs::write(&x, r#"{"space":"real","atoms":[["0","1/2"],["1","1/2"]]}"#).unwrap();
    std::fs::write(&y, r#"{"space":"real","atoms":[["0","1/2"],["1","1/2"]]}"#).unwrap();
    // Diagonal joint: the distance vanishes almost surely.
    std::fs::write(&c, r#"{"cells":[["0","0","1/2"],["1","1","1/2"]]}"#).unwrap();
    let out = bin()
        .args(["metric", "--x"])
        .arg(&x)
        .arg("--y")
        .arg(&y)
        .arg("--coupling")
        .arg(&c)
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");
}

#[test]
fn quarter_joint_fixture_runs() {
    let out = bin()
        .arg("run")
        .arg(spec_path("quarter-joint.rcl"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("delta_star_sup=1/4"), "{text}");
}
