//! End-to-end tests of the `gbdecide` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gbdecide::cli::{ReportDocument, CSV_HEADER, SCHEMA};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbdecide"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decide_exit_codes() {
    let easy = data("easy-example.sys");
    let bad = data("bad-application.sys");
    for mode in ["plain", "buchberger", "extended"] {
        assert_eq!(code(&run(&["decide", path_str(&easy), "--mode", mode])), 0, "{mode}");
        assert_eq!(code(&run(&["decide", path_str(&bad), "--mode", mode])), 1, "{mode}");
    }
    assert_eq!(code(&run(&["decide", "/nonexistent/system.sys"])), 2);
    assert_eq!(code(&run(&["decide", path_str(&easy), "--mode", "bogus"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.sys");
    std::fs::write(&broken, "ring x\npoly x +\n").unwrap();
    assert_eq!(code(&run(&["decide", path_str(&broken)])), 2);
}

#[test]
fn decide_text_names_the_witness() {
    let o = run(&["decide", path_str(&data("bad-application.sys"))]);
    assert!(stdout(&o).contains("witness: (1,3) remainder y*z"), "{}", stdout(&o));
}

#[test]
fn json_report_is_stable_and_round_trips() {
    let o = run(&["decide", path_str(&data("easy-example.sys")), "--json", "--verify"]);
    assert_eq!(code(&o), 0);
    let doc: ReportDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.schema, SCHEMA);
    assert!(doc.verdict);
    assert_eq!(doc.verified, Some(true));
    assert_eq!(doc.counts.reductions, 3);
    assert_eq!(doc.pairs.len(), 6);
    let again = serde_json::to_string(&doc).unwrap();
    let back: ReportDocument = serde_json::from_str(&again).unwrap();
    assert_eq!(back, doc);
    assert_eq!(serde_json::to_string(&back).unwrap(), again);
}

#[test]
fn mode_changes_counts_not_verdicts() {
    for file in ["easy-example.sys", "bad-application.sys", "pham-not-gb.sys"] {
        let p = data(file);
        let mut verdicts = Vec::new();
        let mut counts = Vec::new();
        for mode in ["plain", "buchberger", "extended"] {
            let o = run(&["decide", path_str(&p), "--mode", mode, "--json"]);
            let doc: ReportDocument = serde_json::from_str(&stdout(&o)).unwrap();
            verdicts.push(doc.verdict);
            counts.push(doc.counts.reductions);
        }
        assert!(verdicts.iter().all(|&v| v == verdicts[0]), "{file}");
        assert!(counts[2] <= counts[1] && counts[1] <= counts[0], "{file}: {counts:?}");
    }
}

#[test]
fn gen_pham_writes_system_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.sys");
    let o = run(&["gen-pham", "--m", "4", "--seed", "3", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.exists());
    assert!(dir.path().join("g.sys.factors").exists());
    assert_eq!(code(&run(&["decide", path_str(&out), "--mode", "pham"])), 0);
    assert_eq!(code(&run(&["check-theory", path_str(&out)])), 0);

    let non = dir.path().join("n.sys");
    let o = run(&["gen-pham", "--m", "4", "--seed", "3", "--no-gb", "--out", path_str(&non)]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["decide", path_str(&non)])), 1);

    let one = dir.path().join("one.sys");
    let o = run(&["gen-pham", "--m", "1", "--out", path_str(&one)]);
    assert_eq!(code(&o), 2);
    assert!(!one.exists());
}

#[test]
fn bench_csv_shape() {
    let o = run(&["bench", "--m-range", "5-4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim_end(), CSV_HEADER);

    let o = run(&["bench", "--m-range", "4-5", "--seeds", "2", "--kind", "gb"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 6, "{line}");
        let m: usize = cols[0].parse().unwrap();
        let reductions: usize = cols[4].parse().unwrap();
        match cols[2] {
            "plain" => assert_eq!(reductions, m * (m - 1) / 2),
            "extended" | "pham" => assert_eq!(reductions, m - 1, "{line}"),
            _ => {}
        }
    }
}

#[test]
fn check_theory_exit_codes() {
    assert_eq!(code(&run(&["check-theory", path_str(&data("easy-example.sys"))])), 0);
    let o = run(&["check-theory", path_str(&data("bad-application.sys"))]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
    assert_eq!(code(&run(&["check-theory", "--m", "5", "--seed", "9"])), 0);
}
