use std::io::Write;

use assert_cmd::Command;
use predicates::str::contains;
use stablebps::extract::betti_input_for;
use stablebps::{CurveClass, Surface};

fn cmd() -> Command {
    Command::cargo_bin("stablebps").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = cmd()
        .args(args)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    String::from_utf8(out).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("missing {key} in {text}"))
}

#[test]
fn bounds_plane_sextic() {
    let text = stdout_of(&["bounds", "-s", "P2", "-b", "6"]);
    assert_eq!(field(&text, "N1"), "8");
    assert_eq!(field(&text, "N2"), "8");
    assert_eq!(field(&text, "N"), "8");
    assert_eq!(text, include_str!("golden/bounds_p2_6.txt"));
}

#[test]
fn bounds_quadric() {
    let text = stdout_of(&["bounds", "-s", "P1xP1", "-b", "3,5"]);
    assert_eq!(field(&text, "N1"), "4");
}

#[test]
fn bounds_line_has_no_splitting() {
    let text = stdout_of(&["bounds", "-s", "P2", "-b", "1"]);
    assert_eq!(field(&text, "N1"), "inf");
    assert_eq!(field(&text, "witness"), "none");
}

#[test]
fn bps_csv_rows() {
    let text = stdout_of(&["bps", "-s", "P2", "-b", "6", "--format", "csv"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j,n"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    for row in ["0,2,1", "1,1,0", "2,0,1"] {
        assert!(rows.contains(&row), "{row}");
    }
    assert_eq!(text, include_str!("golden/bps_p2_6.csv"));
}

#[test]
fn bps_json_schema() {
    let text = stdout_of(&["bps", "-s", "P2", "-b", "6", "--format", "json"]);
    assert_eq!(text, include_str!("golden/bps_p2_6.json"));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec!["surface", "beta", "N1", "N2", "N", "table", "route"];
    expected.sort();
    let mut keys = keys;
    keys.sort();
    assert_eq!(keys, expected);
    for row in v["table"].as_array().unwrap() {
        let mut row_keys: Vec<&str> = row
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        row_keys.sort();
        assert_eq!(row_keys, ["i", "j", "n"]);
        assert!(row["n"].is_string());
    }
    assert_eq!(v["route"], "formula");
}

#[test]
fn bps_table_format() {
    let text = stdout_of(&["bps", "-s", "dP:2", "-b", "3;1,1"]);
    assert!(text.starts_with("dP:2 beta=3;1,1 N="), "{text}");
}

#[test]
fn betti_hilb_plane() {
    let text = stdout_of(&["betti-hilb", "-s", "P2", "-n", "2"]);
    let b: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(b, ["1", "0", "2", "0", "3", "0", "2", "0", "1"]);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--cap", "16"];
    let first = cmd()
        .args(args)
        .assert()
        .code(0)
        .get_output()
        .stdout
        .clone();
    let second = cmd()
        .args(args)
        .assert()
        .code(0)
        .get_output()
        .stdout
        .clone();
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 27);
    assert!(text.ends_with("failures: 0\n"));
}

#[test]
fn verify_rejects_large_cap() {
    cmd()
        .args(["verify", "--cap", "201"])
        .assert()
        .code(1)
        .stderr(contains("CapTooLarge"));
}

#[test]
fn extract_roundtrip() {
    let text = stdout_of(&["extract", "-s", "P1xP1", "-b", "2,3"]);
    assert!(text.ends_with("failures: 0\n"), "{text}");
}

fn write_input(
    s: &Surface,
    beta: &CurveClass,
    k: u32,
    m: u32,
    bump: Option<(u32, u32)>,
) -> tempfile::NamedTempFile {
    let input = betti_input_for(s, beta, k, m).unwrap();
    let mut buf = Vec::new();
    input.write_csv(&mut buf).unwrap();
    let mut text = String::from_utf8(buf).unwrap();
    if let Some((bk, bm)) = bump {
        let prefix = format!("{bk},{bm},");
        text = text
            .lines()
            .map(|l| match l.strip_prefix(&prefix) {
                Some(v) => format!("{prefix}{}", v.parse::<u64>().unwrap() + 1),
                None => l.to_string(),
            })
            .collect::<Vec<_>>()
            .join("\n")
            + "\n";
    }
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    file
}

#[test]
fn extract_from_file() {
    let s = Surface::projective_plane();
    let beta = CurveClass::new(vec![6]);
    let file = write_input(&s, &beta, 8, 8, None);
    let out = cmd()
        .args(["extract", "-s", "P2", "-b", "6", "--input"])
        .arg(file.path())
        .assert()
        .code(0)
        .get_output()
        .stdout
        .clone();
    assert!(String::from_utf8(out).unwrap().ends_with("failures: 0\n"));
}

#[test]
fn extract_mismatch_exits_two() {
    let s = Surface::projective_plane();
    let beta = CurveClass::new(vec![6]);
    // b_8 of the top relative Hilbert scheme feeds only n^{8,0}
    let file = write_input(&s, &beta, 8, 8, Some((8, 8)));
    cmd()
        .args(["extract", "-s", "P2", "-b", "6", "--input"])
        .arg(file.path())
        .assert()
        .code(2)
        .stdout(contains("8,0,"))
        .stdout(contains("MISMATCH"));
}

#[test]
fn extract_rejects_bad_header() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"k,m,x\n0,0,1\n").unwrap();
    cmd()
        .args(["extract", "-s", "P2", "-b", "6", "--input"])
        .arg(file.path())
        .assert()
        .code(1)
        .stderr(contains("InvalidInput"));
}

#[test]
fn chern_count_report() {
    let text = stdout_of(&["chern-count", "--rho", "3", "-m", "3"]);
    assert!(text.ends_with("failures: 0\n"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn domain_errors_name_the_condition() {
    cmd()
        .args(["bounds", "-s", "P2", "-b", "-1"])
        .assert()
        .code(1)
        .stderr(contains("NotAmple"));
    cmd()
        .args(["chern-count", "--rho", "0", "-m", "2"])
        .assert()
        .code(1)
        .stderr(contains("InvalidRho"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["bounds", "-s", "dP:9", "-b", "1"],
        vec!["bounds", "-s", "dP:2", "-b", "3;1"],
        vec!["bps", "-s", "P2", "-b", "x"],
        vec!["frobnicate"],
    ] {
        cmd().args(&args).assert().code(1);
    }
    cmd().arg("--help").assert().code(0);
}
