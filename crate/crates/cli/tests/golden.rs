//! Golden-output tests for every subcommand. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p opconv-cli --test golden`.

mod common;

use std::path::Path;

use common::{crate_dir, golden_path, run, CASES};

#[test]
fn outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in CASES {
        let out = run(args);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if want != out.stdout {
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "golden mismatch: {mismatched:?}");
}

#[test]
fn every_subcommand_has_a_golden_case() {
    for sub in [
        "xi-sweep",
        "alignment",
        "equilibrium",
        "heat-capacity",
        "tank",
        "pipeline",
    ] {
        assert!(CASES.iter().any(|(_, a)| a[0] == sub), "{sub}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (name, args) in CASES {
        assert_eq!(run(args).stdout, run(args).stdout, "{name}");
    }
}

#[test]
fn csv_outputs_lead_with_config_and_header() {
    for (name, args) in CASES.iter().filter(|(_, a)| !a.contains(&"json")) {
        let text = String::from_utf8(run(args).stdout).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# config: subcommand="), "{name}");
        let header = lines.next().unwrap();
        assert!(header.chars().next().unwrap().is_ascii_alphabetic(), "{name}");
    }
}

#[test]
fn json_outputs_are_single_documents() {
    for (name, args) in CASES.iter().filter(|(_, a)| a.contains(&"json")) {
        let out = run(args);
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(doc["config"]["subcommand"].is_string(), "{name}");
        assert!(!doc["result"].is_null(), "{name}");
    }
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("eq.csv");
    let args = ["equilibrium", "--temp-range", "10:100:10"];
    let mut with_file: Vec<&str> = args.to_vec();
    let target_str = target.to_str().unwrap();
    with_file.extend(["--output", target_str]);
    let out = run(&with_file);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), run(&args).stdout);
}

#[test]
fn equilibrium_at_room_temperature() {
    let text = String::from_utf8(run(&["equilibrium", "--temp-kelvin", "300"]).stdout).unwrap();
    let value: f64 = text.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((value - 0.7492).abs() < 1e-4);
}

#[test]
fn exit_codes() {
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("Usage"));

    let bad_x0 = run(&["tank", "--x0", "1.5", "--rate", "0.01"]);
    assert_eq!(bad_x0.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_x0.stderr).contains("x0 must be in [0,1]"));

    for args in [
        &["frobnicate"][..],
        &["equilibrium"],
        &["equilibrium", "--temp-kelvin", "300", "--unknown-flag"],
        &["equilibrium", "--temp-kelvin", "-4"],
        &["tank", "--order", "3", "--rate", "0.01"],
        &["heat-capacity", "--species", "meta", "--temp-kelvin", "100"],
        &["xi-sweep", "--synthetic", "exponential:1"],
        &["xi-sweep", "--synthetic", "exponential:1:0.5", "--theta", "200"],
        &["alignment", "--model", "--et", "0.1", "--a-slow", "0.2"],
        &[
            "pipeline",
            "--population",
            "tests/data/population.csv",
            "--filter",
            "sideways",
            "--steric-ratio",
            "2",
            "--base-rate",
            "0.1",
            "--dwell",
            "1",
        ],
    ] {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty());
    }

    for args in [
        &["equilibrium", "--temp-kelvin", "3000"][..],
        &["xi-sweep", "--density", "tests/data/missing.cube"],
        &["xi-sweep", "--density", "tests/data/bad_value.cube"],
        &["tank", "--calibrate", "--target-boiloff", "0.9"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn golden_directory_has_no_strays() {
    let dir = crate_dir().join("tests/golden");
    for entry in std::fs::read_dir(&dir).unwrap() {
        let name = entry.unwrap().file_name();
        let stem = Path::new(&name).file_stem().unwrap().to_str().unwrap().to_string();
        assert!(CASES.iter().any(|(n, _)| *n == stem), "{stem}");
    }
}
