//! Invocations shared by the golden and acceptance suites.

pub const CASES: &[(&str, &[&str])] = &[
    (
        "xi_sweep_synthetic",
        &[
            "xi-sweep",
            "--synthetic",
            "exponential:1:0.5",
            "--z-steps",
            "6",
            "--theta",
            "10,45,70,90",
        ],
    ),
    (
        "xi_sweep_gaussian_json",
        &[
            "xi-sweep",
            "--synthetic",
            "gaussian:0.8:1.2",
            "--z-min",
            "0",
            "--z-max",
            "2",
            "--z-steps",
            "5",
            "--lambda-c",
            "2.5",
            "--format",
            "json",
        ],
    ),
    (
        "xi_sweep_cube",
        &[
            "xi-sweep",
            "--density",
            "tests/data/blob.cube",
            "--z-min",
            "0.2",
            "--z-max",
            "1.4",
            "--z-steps",
            "7",
            "--theta",
            "10,70",
        ],
    ),
    (
        "alignment_table",
        &[
            "alignment",
            "--table",
            "tests/data/alignment.csv",
            "--j",
            "1",
            "--etot",
            "0.3",
        ],
    ),
    (
        "alignment_table_json",
        &[
            "alignment",
            "--table",
            "tests/data/alignment.csv",
            "--j",
            "2",
            "--etot",
            "0.9",
            "--format",
            "json",
        ],
    ),
    (
        "alignment_model",
        &["alignment", "--model", "--et", "0,0.25,0.5,0.75,1", "--width", "0.2"],
    ),
    ("equilibrium_single", &["equilibrium", "--temp-kelvin", "300"]),
    ("equilibrium_range", &["equilibrium", "--temp-range", "10:100:10"]),
    (
        "equilibrium_json",
        &["equilibrium", "--temp-kelvin", "20.4", "--format", "json"],
    ),
    (
        "heat_capacity_para",
        &["heat-capacity", "--species", "para", "--temp-range", "25:400:16"],
    ),
    (
        "heat_capacity_equilibrium_json",
        &[
            "heat-capacity",
            "--species",
            "equilibrium",
            "--temp-kelvin",
            "150",
            "--j-max",
            "40",
            "--format",
            "json",
        ],
    ),
    (
        "tank_trajectory",
        &["tank", "--rate", "0.0097", "--hours", "24", "--dt", "2"],
    ),
    (
        "tank_first_order_json",
        &[
            "tank",
            "--order",
            "1",
            "--rate",
            "0.02",
            "--hours",
            "3",
            "--dt",
            "1",
            "--heat-leak",
            "0.001",
            "--format",
            "json",
        ],
    ),
    (
        "tank_calibrate",
        &["tank", "--calibrate", "--target-boiloff", "0.4", "--at-hours", "100"],
    ),
    (
        "pipeline_slow",
        &[
            "pipeline",
            "--population",
            "tests/data/population.csv",
            "--steric-ratio",
            "2",
            "--base-rate",
            "0.01",
            "--dwell",
            "1",
        ],
    ),
    (
        "pipeline_fast_json",
        &[
            "pipeline",
            "--population",
            "tests/data/population.csv",
            "--filter",
            "fast",
            "--steric-ratio",
            "3",
            "--base-rate",
            "0.5",
            "--dwell",
            "2",
            "--format",
            "json",
        ],
    ),
    (
        "pipeline_none",
        &[
            "pipeline",
            "--population",
            "tests/data/population.csv",
            "--filter",
            "none",
            "--steric-ratio",
            "2",
            "--base-rate",
            "0.01",
            "--dwell",
            "1",
        ],
    ),
];

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opconv"))
        .args(args)
        .current_dir(crate_dir())
        .output()
        .expect("binary runs")
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{name}.out"))
}
