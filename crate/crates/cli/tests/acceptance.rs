//! One PASS/FAIL line per acceptance criterion, run against the `fpt` binary
//! where a criterion exercises the command line.
//!
//! Two criteria cannot pass as stated and are expected to fail:
//! 5 claims α(4,19) = 9, but the recursion gives 20 (the order-9 value is z = 8);
//! 11 claims agreement at every z in F_p, but at z = 0 the Morgan-Voyce values
//! keep the constant term that f_(m,p) loses (MV_4(0) = 2, f_(4,3)(0) = 1).
//! The run fails if either starts passing, or if any other criterion fails.

use std::process::{Command, ExitCode};

use anyhow::{bail, Context, Result};
use fpt_cli::acceptance::{run_all, Level};
use serde_json::Value;

const EXPECTED_FAILURES: [(u8, &str); 2] = [(5, "z=4: alpha 20 (expected 9)"), (11, "all at z = 0")];

fn binary(args: &[&str]) -> Result<Value> {
    let out = Command::new(env!("CARGO_BIN_EXE_fpt")).args(args).output().context("spawning fpt")?;
    if !out.status.success() {
        bail!("fpt {} exited with {}: {}", args.join(" "), out.status, String::from_utf8_lossy(&out.stderr));
    }
    Ok(serde_json::from_slice(&out.stdout)?)
}

fn main() -> ExitCode {
    let level = match std::env::var("FPT_ACCEPTANCE_LEVEL").as_deref() {
        Ok("quick") => Level::Quick,
        _ => Level::Full,
    };
    println!("acceptance criteria ({level:?})");
    let outcomes = run_all(level, &binary, |o| println!("{}", o.line()));
    let mut unexpected = Vec::new();
    for o in &outcomes {
        match EXPECTED_FAILURES.iter().find(|(id, _)| *id == o.id) {
            Some((_, evidence)) if o.passed || !o.detail.contains(evidence) => {
                unexpected.push(format!("{}: expected the documented failure ({evidence})", o.id))
            }
            Some(_) => {}
            None if !o.passed => unexpected.push(format!("{}: {}", o.id, o.detail)),
            None => {}
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} passed; expected failures: 5, 11", outcomes.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("unexpected: {u}");
        }
        ExitCode::FAILURE
    }
}
