use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gsmm_bench::csv::{parse_float, parse_trajectory, CSV_HEADER};
use gsmm_bench::grid::TABLE_HEADER;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn gsmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsmm"))
        .args(args)
        .env("GSMM_DATA_DIR", data_dir())
        .output()
        .expect("spawn gsmm")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn strip_wallclock(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| match l.rfind(',') {
            Some(i) if !l.starts_with('#') => l[..i].to_string(),
            _ => l.to_string(),
        })
        .collect()
}

#[test]
fn synthetic_run_writes_one_row_per_iteration() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let o = gsmm(&[
        "run",
        "--dataset",
        "synthetic",
        "--iters",
        "200",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(&csv);
    assert!(text.lines().any(|l| l == CSV_HEADER));
    let parsed = parse_trajectory(&text).unwrap();
    assert_eq!(parsed.rows.len(), 200);
    assert_eq!(parsed.rows[199].t, 199);
    assert_eq!(parsed.meta("algo"), Some("nsgda-m"));
    assert_eq!(parsed.meta("t_max"), Some("200"));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("rows=200"), "{stdout}");
}

#[test]
fn runs_are_deterministic_apart_from_wallclock() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = gsmm(&[
            "run",
            "--dataset",
            "diabetes",
            "--iters",
            "300",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        strip_wallclock(&read(&p))
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn numerical_blowup_exits_4_and_keeps_partial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("blowup.csv");
    let o = gsmm(&[
        "run",
        "--dataset",
        "synthetic",
        "--algo",
        "sgda",
        "--eta-x",
        "10",
        "--eta-y",
        "0.1",
        "--batch",
        "1",
        "--iters",
        "1000",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(&csv);
    assert!(text.lines().any(|l| l.starts_with("# abort=")));
    let rows = parse_trajectory(&text).unwrap().rows;
    assert!(!rows.is_empty() && rows.len() < 1000);
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(gsmm(&["run", "--algo", "adam"]).status.code(), Some(2));
    assert_eq!(gsmm(&["run", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(gsmm(&["schedule", "--theorem", "7"]).status.code(), Some(2));
}

#[test]
fn missing_dataset_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = gsmm(&[
        "run",
        "--dataset",
        "no-such-file.libsvm",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn grid_writes_ranked_table_and_reruns_winner() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = gsmm(&[
        "grid",
        "--dataset",
        "synthetic",
        "--algo",
        "sgda",
        "--batch",
        "1",
        "--iters",
        "100",
        "--eta-x-grid",
        "0.01,10",
        "--eta-y-grid",
        "0.1,0.01",
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = read(&dir.path().join("grid_table.csv"));
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], TABLE_HEADER);
    assert_eq!(lines.len(), 1 + 4);
    let fields: Vec<Vec<&str>> = lines[1..].iter().map(|l| l.split(',').collect()).collect();
    for (i, f) in fields.iter().enumerate() {
        assert_eq!(f[0], (i + 1).to_string());
        let eta_x = parse_float(f[1]).unwrap();
        let metric = parse_float(f[6]).unwrap();
        if i < 2 {
            assert_eq!(eta_x, 0.01, "{f:?}");
            assert!(metric.is_finite());
        } else {
            assert_eq!(eta_x, 10.0, "{f:?}");
            assert_eq!(metric, f64::INFINITY, "{f:?}");
        }
    }
    assert!(dir.path().join("grid_best.txt").is_file());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("combos=4"), "{stdout}");
}

#[test]
fn schedule_and_parse_commands_print_key_values() {
    let o = gsmm(&["schedule", "--theorem", "3", "--sigma-x", "1", "--sigma-y", "1"]);
    assert!(o.status.success());
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.lines().any(|l| l.starts_with("eta_y=")), "{s}");
    let o = gsmm(&["parse", "diabetes"]);
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("samples=768") && s.contains("table_match=true"), "{s}");
}

/// Reference run: diabetes, NSGDA-M, beta 0.9, eta_x 1e-3, eta_y 1e-2, batch 1,
/// 5000 iterations; the target is a final gradient norm at most 0.2 of the initial one.
#[test]
fn reference_run_reduces_gradient_norm_fivefold() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ref.csv");
    let o = gsmm(&[
        "run",
        "--dataset",
        "diabetes",
        "--algo",
        "nsgda-m",
        "--beta",
        "0.9",
        "--eta-x",
        "1e-3",
        "--eta-y",
        "1e-2",
        "--batch",
        "1",
        "--iters",
        "5000",
        "--seed",
        "42",
        "--record-every",
        "50",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rows = parse_trajectory(&read(&csv)).unwrap().rows;
    let (first, last) = (rows[0].grad_phi_norm, rows.last().unwrap().grad_phi_norm);
    assert!(last <= 0.2 * first, "initial {first:e}, final {last:e}");
}
