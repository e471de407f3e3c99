use std::process::{Command, Output};

fn deltader(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltader")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    deltader(args).status.code().unwrap()
}

fn write_temp(name: &str, text: &str) -> std::path::PathBuf {
    let p = std::env::temp_dir().join(format!("deltader-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn list_shows_every_family() {
    let out = deltader(&["--format", "json", "list"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 16);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["der", "--family", "s1", "--n", "2"]), 1);
    assert_eq!(code(&["der", "--family", "s1", "--n", "5", "--delta", "x"]), 1);
    assert_eq!(code(&["no-such-command"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["analyze", "--family", "s-n2", "--n", "5"]), 0);
    assert_eq!(code(&["table", "--families", "s2", "--n", "4:4"]), 4);
    assert_eq!(code(&["witness", "--family", "schrodinger", "--n", "3"]), 4);
    assert_eq!(code(&["witness", "--family", "s1", "--n", "5", "--beta", "2"]), 0);

    let broken = write_temp(
        "broken.json",
        r#"{"name": "broken", "dim": 3, "basis": ["a", "b", "c"],
            "brackets": [{"i": 0, "j": 1, "terms": {"1": "1"}},
                         {"i": 0, "j": 2, "terms": {"1": "1"}},
                         {"i": 1, "j": 2, "terms": {"0": "1"}}]}"#,
    );
    let path = broken.to_str().unwrap();
    assert_eq!(code(&["jacobi", path]), 2);
    assert_eq!(code(&["analyze", path]), 2);
    let garbage = write_temp("garbage.json", "{not json");
    assert_eq!(code(&["der", garbage.to_str().unwrap()]), 1);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        &["--format", "json", "analyze", "--family", "tau3", "--n", "4"][..],
        &["locder", "--family", "s1", "--n", "5", "--beta", "2"][..],
        &["--format", "csv", "table", "--families", "s-n2,tau2", "--n", "4:6"][..],
    ] {
        let a = deltader(args);
        let b = deltader(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn built_files_load_back() {
    let out = deltader(&["--format", "json", "build", "--family", "oscillator", "--n", "2"]);
    let file = write_temp("osc.json", std::str::from_utf8(&out.stdout).unwrap());
    let der = deltader(&["--format", "json", "der", file.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&der.stdout).unwrap();
    assert_eq!(v["dim"], 6);
}

#[test]
fn table_rows_match() {
    let out = deltader(&["--format", "json", "table", "--families", "s-n2,heis-solv", "--n", "4:5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["match"] == true && r["twolocal_status"] == "PASS"));
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("deltader-{}-out.md", std::process::id()));
    let out = deltader(&["--out", path.to_str().unwrap(), "jacobi", "--family", "s3", "--n", "5"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(!std::fs::read_to_string(&path).unwrap().is_empty());
}
