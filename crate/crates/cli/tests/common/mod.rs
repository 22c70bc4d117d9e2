#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// Fixture commands whose output is pinned in `tests/golden/<name>.json`.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("dist_dirac", &["dist", "delta0.json", "delta3.json", "--metric", "euclidean"]),
    ("coupling_half", &["coupling", "half01.json", "delta1.json"]),
    ("coupling_shift", &["coupling", "half01.json", "half12.json"]),
    ("dist_table", &["dist", "labels_ab.json", "labels_bc.json", "--metric", "table.json"]),
    ("barycenter_pair", &["barycenter", "pair2d.json"]),
    ("flatten_mix", &["flatten", "m2_mix.json"]),
    ("dist2_dirac", &["dist2", "m2_dd0.json", "m2_d12.json"]),
    (
        "lift_first_coord",
        &["lift", "p05.json", "p0m3.json", "--metric", r#"{"kind":"pullback","coords":[0],"inner":{"kind":"euclidean"}}"#],
    ),
    ("coupling_manhattan", &["coupling", "pair2d.json", "other2d.json", "--metric", "manhattan"]),
    ("laws_small", &["laws", "--seed", "42", "--samples", "10"]),
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

pub fn kanto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kanto"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("kanto binary runs")
}
