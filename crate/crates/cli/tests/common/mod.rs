#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn toy(file: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/toy")
        .join(file);
    p.canonicalize().unwrap().display().to_string()
}

pub fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
}

pub fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regomax"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

pub fn run_ok(out: &Path, args: &[&str]) {
    let o = run(out, args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
}

/// `edges`, `labels` and `selection` flags of the bundled demo network.
pub fn toy_inputs() -> Vec<String> {
    vec![
        "--edges".into(),
        toy("edges.txt"),
        "--labels".into(),
        toy("labels.tsv"),
        "--selection".into(),
        toy("selection.csv"),
    ]
}

pub fn with<'a>(cmd: &'a str, base: &'a [String], extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend(base.iter().map(String::as_str));
    v.extend_from_slice(extra);
    v
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

/// Every subcommand on the demo network; returns the output file names.
pub fn pipeline(out: &Path) -> Vec<&'static str> {
    let base = toy_inputs();
    run_ok(out, &with("rank", &base, &[]));
    run_ok(out, &with("reduce", &base, &["--sector", "bank,country"]));
    run_ok(out, &with("sensitivity", &base, &[]));
    run_ok(out, &with("network", &base, &[]));
    run_ok(out, &with("bench", &base[..4], &[]));
    vec![
        "ranks.csv",
        "rankjoin.csv",
        "rankplane.csv",
        "reduced_GR.csv",
        "reduced_Grr.csv",
        "reduced_Gpr.csv",
        "reduced_Gqr.csv",
        "weights.csv",
        "sector_weights.csv",
        "sector_bank_country_GR.csv",
        "sector_bank_country_Gqr.csv",
        "scattering.csv",
        "sensitivity.csv",
        "sensitivity_extrema.csv",
        "network.dot",
        "network.json",
        "bench.csv",
    ]
}

/// File contents with the wall-clock columns of `bench.csv` dropped.
pub fn comparable(dir: &Path, name: &str) -> String {
    let text = read(&dir.join(name));
    if name != "bench.csv" {
        return text;
    }
    text.lines()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            [&f[..6], &f[9..]].concat().join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
