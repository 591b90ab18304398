#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rankcal::synthetic::{generate, CappedLinkConfig};

pub fn rankcal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankcal"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs and asserts success, returning standard output.
pub fn ok(args: &[&str]) -> String {
    let out = rankcal(args);
    assert!(
        out.status.success(),
        "rankcal {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

pub fn fails(args: &[&str]) -> String {
    let out = rankcal(args);
    assert!(!out.status.success(), "rankcal {args:?} unexpectedly succeeded");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Capped-link CSV with columns x1, x2, y, eta, gift (gift > 0 only for
/// positives).
pub fn write_csv(path: &Path, a: f64, n: usize, seed: u64) {
    let data = generate(&CappedLinkConfig::new(a, n, seed)).unwrap();
    let mut text = String::from("x1,x2,y,eta,gift\n");
    for (i, (x, y)) in data.iter().enumerate() {
        let gift = if y { 5.0 + (i % 7) as f64 } else { 0.0 };
        writeln!(
            text,
            "{},{},{},{},{}",
            x.get(0),
            x.get(1),
            u8::from(y),
            data.true_eta().unwrap()[i],
            gift
        )
        .unwrap();
    }
    std::fs::write(path, text).unwrap();
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

pub struct Workspace {
    pub dir: tempfile::TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn p(&self, name: &str) -> String {
        path_str(&self.path(name)).to_string()
    }
}

pub fn parse_lines(text: &str) -> Vec<f64> {
    text.lines()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect()
}

pub fn key_value(report: &str, key: &str) -> Option<f64> {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .map(|v| v.parse().unwrap())
}
