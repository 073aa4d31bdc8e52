//! Black-box checks of the command line binary.

use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_prop-hecke"));
    for var in [
        "PROP_HECKE_CAP_LENGTH",
        "PROP_HECKE_CAP_ORBIT",
        "PROP_HECKE_CAP_DIMENSION",
    ] {
        c.env_remove(var);
    }
    c
}

#[test]
fn report_files_are_byte_identical_across_runs() {
    let dir = std::env::temp_dir();
    let pid = std::process::id();
    let paths = [
        dir.join(format!("prop-hecke-det-{pid}-1.jsonl")),
        dir.join(format!("prop-hecke-det-{pid}-2.jsonl")),
    ];
    for path in &paths {
        let status = bin()
            .args([
                "check", "--preset", "SL2", "--p", "3", "--suite", "all", "--seed", "42", "--out",
            ])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    for path in &paths {
        let _ = std::fs::remove_file(path);
    }
    assert_eq!(a, b, "two identical runs wrote different bytes");
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["schema"], "prop-hecke.report.v1");
    for line in lines {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(rec["suite"].is_string() && rec["instance"].is_string());
        assert!(matches!(
            rec["status"].as_str(),
            Some("pass") | Some("fail") | Some("flagged")
        ));
    }
}

#[test]
fn list_suites_prints_the_canonical_ids() {
    let out = bin().arg("list-suites").output().unwrap();
    assert!(out.status.success());
    let got: Vec<&str> = std::str::from_utf8(&out.stdout).unwrap().lines().collect();
    assert_eq!(got, prop_hecke::suites::SUITES.to_vec());
}

#[test]
fn unknown_suite_ids_are_a_config_error() {
    let out = bin()
        .args(["check", "--preset", "SL2", "--suite", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite id"));
    assert!(out.stdout.is_empty(), "a bad id must not start a partial run");
}

#[test]
fn config_file_overrides_flags() {
    let dir = std::env::temp_dir();
    let cfg_path = dir.join(format!("prop-hecke-cfg-{}.json", std::process::id()));
    std::fs::write(&cfg_path, r#"{"preset":"SL2","suites":["moebius"]}"#).unwrap();
    let out = bin()
        .args(["check", "--preset", "SL3", "--p", "3", "--suite", "all", "--config"])
        .arg(&cfg_path)
        .output()
        .unwrap();
    let _ = std::fs::remove_file(&cfg_path);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.contains("\"suite\":\"moebius\"")));
    assert!(text.lines().count() > 1);
}

#[test]
fn describe_emits_the_structure_as_json() {
    let out = bin()
        .args(["describe", "--preset", "SL3", "--p", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["finite_weyl_order"], 6);
    assert_eq!(doc["affine_generators"], 3);
    assert_eq!(doc["p"], 2);
}
