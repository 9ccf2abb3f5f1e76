//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

/// Gini from its all-pairs definition, sum |xi - xj| / (2 n^2 mu).
/// Quadratic on purpose: an oracle independent of the library's
/// order-statistic form.
pub fn brute_force_gini(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut acc = 0.0;
    for &a in values {
        for &b in values {
            acc += (a - b).abs();
        }
    }
    acc / (2.0 * n * n * mean)
}

/// Run the packaged binary with the given arguments and wait for it.
pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tailineq"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

/// Write one decimal per line, the plain-text input format.
pub fn write_lines(path: &Path, values: &[f64]) {
    let mut text = String::new();
    for v in values {
        text.push_str(&format!("{v}\n"));
    }
    std::fs::write(path, text).expect("fixture should be writable");
}
