#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn config(name: &str) -> PathBuf {
    crate_dir().join("configs").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn dlcorr(args: &[&str], out: &Path) -> Run {
    let o = Command::new(env!("CARGO_BIN_EXE_dlcorr"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn dlcorr");
    Run {
        code: o.status.code().expect("exit code"),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

pub fn run_ok(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) {
    let mut args = vec![cmd, "--config", cfg.to_str().unwrap()];
    args.extend_from_slice(extra);
    let r = dlcorr(&args, out);
    assert_eq!(r.code, 0, "{cmd} {}: {}", cfg.display(), r.stderr);
}

pub fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn schema(name: &str) -> jsonschema::Validator {
    let s = read_json(&crate_dir().join("schemas").join(name));
    jsonschema::validator_for(&s).expect("valid schema")
}

/// Header and numeric rows of a CSV written by the tool.
pub fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

pub fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

pub const EXAMPLES: [&str; 5] = [
    "oscillator.json",
    "synthetic.json",
    "gamma_tau_sweep.json",
    "evolve_kappa_sweep.json",
    "empty_constraints.json",
];

/// Subcommands each example config supports.
pub fn commands_for(cfg: &str) -> &'static [&'static str] {
    match cfg {
        "oscillator.json" | "evolve_kappa_sweep.json" => &["constraints", "gamma", "correspond", "evolve"],
        _ => &["constraints", "gamma", "correspond"],
    }
}
