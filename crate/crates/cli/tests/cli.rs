use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use subspace_bounds::BoundReport;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subspace-bounds")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("subspace-bounds-cli-{}-{name}", std::process::id()))
}

#[test]
fn golden_grassmann_reports() {
    let out = bin(&["grassmann", "--n", "6", "--k", "3", "--delta", "2", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("grassmann_6_3_2_combined.json"));

    let out = bin(&["grassmann", "--n", "4", "--k", "2", "--delta", "2", "--method", "all", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("grassmann_4_2_2_all.json"));
}

#[test]
fn golden_ev_lp_reports() {
    let out = bin(&["projective", "--n", "7", "--d", "5", "--method", "ev-lp", "--extra-cuts", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("ev_lp_7_5_cuts.json"));

    let out = bin(&["projective", "--n", "7", "--d", "3", "--metric", "injection", "--method", "ev-lp", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("ev_lp_inj_7_3.json"));
}

#[test]
fn reports_parse_back() {
    let out = bin(&["projective", "--n", "8", "--d", "5", "--format", "json"]);
    assert!(out.status.success());
    let r: BoundReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r.floored_i128(), Some(360));
    assert_eq!(r.status, "optimal");
    assert_eq!(r.cuts_applied, vec!["dimension_cap".to_string()]);
    assert!(r.wall_ms.is_none());
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<Output> = (0..2).map(|_| bin(&["projective", "--n", "9", "--d", "5", "--format", "json"])).collect();
    assert_eq!(runs[0].stdout, runs[1].stdout);
    let tables: Vec<Output> = (0..2).map(|_| bin(&["table", "--which", "1", "--max-n", "9", "--format", "csv"])).collect();
    assert_eq!(tables[0].stdout, tables[1].stdout);
}

#[test]
fn timings_are_opt_in() {
    let out = bin(&["grassmann", "--n", "6", "--k", "3", "--delta", "2", "--format", "json", "--timings"]);
    let r: BoundReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(r.wall_ms.is_some());
}

#[test]
fn thread_count_does_not_change_tables() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_subspace-bounds"))
            .args(["table", "--which", "2", "--max-n", "9", "--format", "json"])
            .env("SUBSPACE_BOUNDS_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("4").stdout);
}

#[test]
fn table_rows_by_size() {
    let out = bin(&["table", "--which", "1", "--max-n", "8", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().len(), 13);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 7);
    assert_eq!(&rows[0][0], "A_2(4,3)");
    assert!(rows.iter().all(|r| r.len() == 13));
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        &["projective", "--n", "4", "--d", "9"][..],
        &["projective", "--n", "5", "--d", "3", "--extra-cuts"],
        &["projective", "--n", "7", "--d", "3", "--metric", "injection", "--method", "ev-lp", "--extra-cuts"],
        &["projective", "--n", "5", "--d", "3", "--tol", "0"],
        &["grassmann", "--n", "4", "--k", "2", "--delta", "2", "--method", "bogus"],
        &["grassmann", "--q", "1", "--n", "4", "--k", "2", "--delta", "2"],
        &["table", "--which", "3"],
        &["projective", "--n", "5"],
    ] {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn solver_failure_exits_3_with_report() {
    // the d = 2 optimum near 4.5e9 stops short of the gap target
    let out = bin(&["projective", "--n", "11", "--d", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    let r: BoundReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_ne!(r.status, "optimal");
    assert!(r.floored_bound.is_none());
}

#[test]
fn unwritable_output_exits_4() {
    let out = bin(&["export", "--model", "sdp", "--n", "5", "--d", "3", "--out", "/nonexistent/dir/model.dat-s"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn exports_to_files_and_stdout() {
    let path = temp("ev.lp");
    let out = bin(&["export", "--model", "ev-lp", "--n", "7", "--d", "5", "--extra-cuts", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("# subspace-bounds LP v1\n"));
    assert!(text.contains("single_large[5]: 1 x_5 <= 1"));
    assert!(text.contains("pair_cap[3]: 1 x_3 + 1 x_5 <= 17"));
    assert!(text.contains("complement_pair[4]: 1 x_2 + 1 x_4 <= 17"));

    let out = bin(&["export", "--model", "sdp", "--n", "5", "--d", "3", "--out", "-"]);
    assert!(out.status.success());
    let sdpa = subspace_bounds_core::optim::parse_sdpa(&stdout(&out)).unwrap();
    assert!(sdpa.num_vars > 0);
}
