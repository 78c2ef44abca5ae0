//! Runs the twelve acceptance criteria, one PASS/FAIL line each.

use std::path::Path;

fn main() {
    let exe = Path::new(env!("CARGO_BIN_EXE_aheft"));
    println!("acceptance suite");
    let checks = aheft_harness::verify::run_acceptance(exe, true);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
    println!("{} passed, {} failed", checks.len() - failed.len(), failed.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
