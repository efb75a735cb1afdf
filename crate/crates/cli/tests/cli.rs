use std::process::{Command, Output};

use serde_json::{json, Value};

fn fpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpt")).args(args).env_remove("FPT_BUDGET").output().expect("spawn fpt")
}

fn report(args: &[&str]) -> Value {
    let out = fpt(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn code(args: &[&str]) -> i32 {
    fpt(args).status.code().expect("exit code")
}

#[test]
fn documented_examples() {
    let v = report(&["planes", "count", "--p", "3", "--m", "6"]);
    assert_eq!((v["planes"].clone(), v["orbits"].clone()), (json!(11011), json!(31)));
    let v = report(&["zigzag", "zeck", "64"]);
    assert_eq!(v["indices"], json!([10, 6, 2]));
    assert_eq!(v["n"], json!("64"));
    let v = report(&["alpha", "table", "--p", "19"]);
    let table = v["table"].as_array().unwrap();
    assert_eq!(table.len(), 18);
    let alpha = |z: u64| table.iter().find(|r| r["z"] == json!(z)).unwrap()["alpha"].clone();
    for (z, a) in [(1, 18), (5, 18), (7, 18), (8, 9), (10, 9), (14, 9), (16, 6), (18, 3), (4, 20)] {
        assert_eq!(alpha(z), json!(a), "z={z}");
    }
    let v = report(&["trinomial", "verify", "--p", "19", "--a", "1", "--b", "5"]);
    assert_eq!(v["match"], json!(true));
    assert_eq!(v["z"], json!(4));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["planes", "count", "--p", "3", "--m", "12"]), 2);
    assert_eq!(code(&["--budget", "10", "zigzag", "enum", "--n", "10"]), 2);
    assert_eq!(code(&["fmp", "build", "--p", "2", "--m", "40"]), 2);
    assert_eq!(code(&["alpha", "table"]), 64);
    assert_eq!(code(&["nonsense"]), 64);
    assert_eq!(code(&["alpha", "table", "--p", "21"]), 64);
    assert_eq!(code(&["zigzag", "zeck", "12x"]), 64);
    assert_eq!(code(&["planes", "pencil", "--p", "3", "--m", "5", "--z", "1"]), 64);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["verify", "recursion", "--p", "2", "--m", "5"]), 0);
    assert_eq!(code(&["verify", "appendix", "--p", "3", "--m", "3"]), 0);
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_fpt"))
        .args(["planes", "zvalues", "--p", "3", "--m", "4"])
        .env("FPT_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    // an explicit flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_fpt"))
        .args(["--budget", "1000", "planes", "zvalues", "--p", "3", "--m", "4"])
        .env("FPT_BUDGET", "10")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn negative_and_big_inputs() {
    let v = report(&["zigzag", "zeck", "-43"]);
    assert_eq!(v["signed_indices"], json!([-2, -7, -10]));
    assert_eq!(v["indices"], Value::Null);
    let big = "123456789012345678901234567890";
    let v = report(&["zigzag", "rep", big]);
    assert_eq!(v["n"], json!(big));
    let v = report(&["zigzag", "rep", "-12", "--base", "sfib"]);
    assert_eq!(v["n"], json!("-12"));
    let v = report(&["alpha", "zp", "--p", "19", "--z", "-1"]);
    assert_eq!(v["alpha"], json!(3));
}

#[test]
fn deterministic_output() {
    let args = ["trinomial", "generate", "--p", "19", "--m", "9"];
    let a = fpt(&args).stdout;
    let b = fpt(&args).stdout;
    let c = fpt(&["--seed", "7", "trinomial", "generate", "--p", "19", "--m", "9"]).stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["poly"].as_array().unwrap().len(), 10);
}

#[test]
fn csv_output() {
    let out = fpt(&["--format", "csv", "alpha", "table", "--p", "5"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "z,alpha\n1,5\n2,6\n3,4\n4,3\n");
    let out = fpt(&["zigzag", "enum", "--n", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("sequence,value_fib,value_sfib"));
    assert_eq!(text.lines().count(), 1 + 5);
}

#[test]
fn support_cache() {
    let dir = std::env::temp_dir().join(format!("fpt-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let d = dir.to_str().unwrap();
    let fresh = fpt(&["--cache-dir", d, "fmp", "build", "--p", "3", "--m", "9"]);
    assert!(fresh.status.success());
    assert!(dir.join("fmp_3_9.json").exists());
    let cached = fpt(&["--cache-dir", d, "fmp", "build", "--p", "3", "--m", "9", "--method", "zigzag"]);
    assert_eq!(fresh.stdout, cached.stdout);
    std::fs::write(dir.join("fmp_3_9.json"), r#"{"p":3,"m":9,"support":["0"]}"#).unwrap();
    assert_eq!(code(&["--cache-dir", d, "fmp", "build", "--p", "3", "--m", "9"]), 64);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cross_checks_report_success() {
    let v = report(&["fmp", "build", "--p", "5", "--m", "10", "--method", "both"]);
    assert_eq!(v["agree"], json!(true));
    assert_eq!(v["terms"], json!(55));
    let v = report(&["fmp", "gcd", "--p", "2", "--m", "6", "--n", "9"]);
    assert_eq!((v["gcd_index"].clone(), v["holds"].clone()), (json!(3), json!(true)));
    let v = report(&["planes", "oracle", "--p", "2", "--m", "8"]);
    assert_eq!(v["matches_recursive"], json!(true));
    let v = report(&["planes", "zvalues", "--p", "3", "--m", "5", "--slow"]);
    assert_eq!(v["size_nonzero"], json!(10));
    let v = report(&["trinomial", "frob2", "--p", "5", "--z", "1"]);
    assert_eq!(v["holds"], json!(true));
    let v = report(&["mv", "poly", "--kind", "B", "--k", "2"]);
    assert_eq!(v["coeffs"], json!(["3", "4", "1"]));
    let v = report(&["fmp", "eval", "--p", "19", "--m", "6", "--z", "16"]);
    assert_eq!(v["value"], json!(0));
}

#[test]
fn selfcheck_quick_reports_each_check() {
    let out = fpt(&["selfcheck", "--level", "quick"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), fpt_cli::acceptance::COUNT);
    let failed: Vec<u64> =
        criteria.iter().filter(|c| c["passed"] == json!(false)).map(|c| c["id"].as_u64().unwrap()).collect();
    // two checks cannot pass as stated; see tests/acceptance.rs
    assert_eq!(failed, vec![5, 11]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), criteria.len());
}
