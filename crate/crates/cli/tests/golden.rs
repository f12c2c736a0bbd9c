//! Golden reports for every command on the fixture corpus. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p purcat --test golden`.

use std::path::{Path, PathBuf};
use std::process::Command;

#[path = "common/cases.rs"]
mod cases;

use cases::CASES;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_purcat")).current_dir(root()).args(args).arg("--no-timing").output().expect("binary runs");
    (String::from_utf8(out.stdout).expect("utf-8 output"), out.status.code().unwrap_or(-1))
}

fn case_args(line: &str) -> Vec<String> {
    let mut parts: Vec<String> = line.split_whitespace().map(String::from).collect();
    let file = parts.pop().expect("fixture");
    parts.push(format!("tests/fixtures/{file}"));
    parts
}

fn render(args: &[String]) -> String {
    let a: Vec<&str> = args.iter().map(String::as_str).collect();
    let (out, code) = run(&a);
    format!("{out}exit: {code}\n")
}

#[test]
fn golden_reports() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let dir = root().join("tests/golden");
    std::fs::create_dir_all(&dir).unwrap();
    let mut failures = Vec::new();
    for (name, line) in CASES {
        let got = render(&case_args(line));
        let path = dir.join(format!("{name}.out"));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        if got != want {
            failures.push(*name);
        }
    }
    assert!(failures.is_empty(), "reports differ from golden files: {failures:?}");
}

#[test]
fn reports_are_byte_stable() {
    for (_, line) in CASES.iter().filter(|(n, _)| n.starts_with("resolve") || n.starts_with("phom") || n.starts_with("batch")) {
        let args = case_args(line);
        assert_eq!(render(&args), render(&args), "{line}");
    }
}

#[test]
fn every_command_has_a_golden_case() {
    for cmd in ["homology", "cone", "truncate", "purity", "qis", "resolve", "towers", "phom", "adjunction", "validate-cert", "batch"] {
        assert!(CASES.iter().any(|(_, l)| l.starts_with(cmd)), "{cmd}");
    }
    let fixtures = std::fs::read_dir(root().join("tests/fixtures")).unwrap().count();
    assert!(fixtures >= 10);
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("purcat-{}-{name}", std::process::id()))
}

fn round_trip(line: &str) {
    let mut args = case_args(line);
    args.insert(0, "--json".into());
    let a: Vec<&str> = args.iter().map(String::as_str).collect();
    let (report, code) = run(&a);
    assert_eq!(code, 0, "{line}");
    let path = tmp(&line.replace([' ', '/'], "_"));
    std::fs::write(&path, report).unwrap();
    let (out, code) = run(&["validate-cert", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0, "{line}: {out}");
    assert!(out.contains(": valid"), "{out}");
}

#[test]
fn emitted_certificates_validate() {
    for line in [
        "resolve --complex M --side injective zmod12_basic.json",
        "resolve --complex M --side projective zmod12_basic.json",
        "resolve --complex M --side injective z_torsion.json",
        "resolve --complex F --side projective free_over_z.json",
        "resolve --complex W --side injective zmod8_window.json",
        "resolve --complex V --side projective zmod8_window.json",
        "towers --complex W --side injective zmod8_window.json",
        "purity --complex K contractible.json",
        "purity --map split zmod12_basic.json",
        "qis --map split_in qis_maps.json",
    ] {
        round_trip(line);
    }
}

#[test]
fn exit_codes() {
    let code = |line: &str| {
        let args = case_args(line);
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        run(&a).1
    };
    assert_eq!(code("homology --complex M times_two.json"), 0);
    assert_eq!(code("purity --complex E exact_not_pure.json"), 1);
    assert_eq!(code("homology --complex M bad_dd.json"), 2);
    assert_eq!(code("homology --complex M no_such_file.json"), 2);
    let (_, c) = run(&["frobnicate", "tests/fixtures/empty.json"]);
    assert_eq!(c, 2);
    assert!(Path::new(&root().join("tests/fixtures/batch.json")).exists());
}
