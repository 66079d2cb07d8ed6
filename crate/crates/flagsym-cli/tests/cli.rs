use std::process::{Command, Output};

fn flagsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagsym"))
        .args(args)
        .env_remove("SP_KMAX")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = flagsym(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn g2_from_n() {
    let v = json(&["prolong", "tanaka", "--spec", "R(3/2)", "--n", "5"]);
    assert_eq!(v["schema"], "sp-1");
    assert_eq!(v["total_dim"], 14);
    assert_eq!(v["killing"]["rank"], 14);
}

#[test]
fn rank_and_n_resolve_the_symbol() {
    let v = json(&["prolong", "tanaka", "--rank", "2", "--n", "5"]);
    assert_eq!(v["symbol"], "R(3/2)");
    let o = flagsym(&["prolong", "tanaka", "--rank", "3", "--n", "7"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_two_box_row() {
    let o = flagsym(&["symbol", "classify", "--spec", "R(1/2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Infinite (one row with two boxes)");
}

#[test]
fn verify_d34_passes() {
    let o = flagsym(&["verify", "--spec", "D(3,4)", "--kmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 5);
}

#[test]
fn verify_failure_exits_2() {
    // Two copies of D(2,3): the cubic slice of the secant ideal is larger
    // than the prolongation.
    let o = flagsym(&["verify", "--spec", "2*D(2,3)", "--kmax", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL tanaka_is_secant_ideal"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(flagsym(&["symbol", "parse", "--spec", "D(2,5)"]).status.code(), Some(1));
    assert_eq!(flagsym(&["symbol", "parse"]).status.code(), Some(1));
    assert_eq!(flagsym(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(flagsym(&["prolong", "tanaka", "--spec", "D(2,3)", "--n", "9"]).status.code(), Some(1));
    let bad = Command::new(env!("CARGO_BIN_EXE_flagsym"))
        .args(["prolong", "tanaka", "--spec", "R(3/2)"])
        .env("SP_KMAX", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn kmax_precedence() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_flagsym"));
        c.args(["prolong", "tanaka", "--spec", "D(2,2)", "--json"]);
        if let Some(f) = flag {
            c.args(["--kmax", f]);
        }
        match env {
            Some(e) => c.env("SP_KMAX", e),
            None => c.env_remove("SP_KMAX"),
        };
        let v: serde_json::Value = serde_json::from_slice(&c.output().unwrap().stdout).unwrap();
        v["k_max"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 6);
    assert_eq!(run(Some("2"), None), 2);
    assert_eq!(run(Some("2"), Some("3")), 3);
}

#[test]
fn json_symbol_and_determinism() {
    let spec = r#"{"components":[{"type":"D","s":2,"l":3},{"type":"R","m2":5}]}"#;
    let v = json(&["symbol", "parse", "--spec", spec]);
    assert_eq!(v["symbol"], "D(2,3)+R(5/2)");
    assert_eq!(v["dim"], 14);
    let a = flagsym(&["verify", "--spec", "D(2,3)", "--kmax", "2", "--json"]);
    let b = flagsym(&["verify", "--spec", "D(2,3)", "--kmax", "2", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn goh_reports_locus_checks() {
    let v = json(&["goh", "--spec", "D(2,3)"]);
    assert_eq!(v["degeneracy"]["kind"], "always_degenerate");
    assert!(v["locus_checks"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    let v = json(&["goh", "--spec", "R(5/2)"]);
    assert_eq!(v["degeneracy"]["kind"], "pfaffian");
}

#[test]
fn secant_matches_hankel() {
    let v = json(&["secant", "--curve-degree", "4", "--order", "1"]);
    assert_eq!(v["dim"], 1);
    assert_eq!(v["hankel"][0]["equal"], true);
}

#[test]
fn extract_round_trip_through_file() {
    let dir = std::env::temp_dir().join(format!("flagsym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.json");
    let p = path.to_str().unwrap();
    let o = flagsym(&["extract", "--spec", "D(2,3)+R(5/2)", "--emit-curve", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&["extract", "--curve", p]);
    assert_eq!(v["symbol"], "D(2,3)+R(5/2)");
    std::fs::write(&path, "{\"sigma\": [[\"0\"]]}").unwrap();
    assert_eq!(flagsym(&["extract", "--curve", p]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn out_writes_file() {
    let path = std::env::temp_dir().join(format!("flagsym-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = flagsym(&["prolong", "flag", "--spec", "D(2,3)", "--json", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "prolong flag");
    std::fs::remove_file(&path).unwrap();
}
