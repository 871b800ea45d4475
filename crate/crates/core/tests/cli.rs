use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ves_core::calibrate::{generate_synthetic, write_observations};
use ves_core::{Grid, RawParams, ValidatedParams};

fn ves(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ves"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_params(dir: &Path, name: &str, p: &RawParams) -> String {
    let path = dir.join(name);
    fs::write(&path, p.to_file_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_accepts_case1_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_params(dir.path(), "case1.txt", &RawParams::CASE_1);
    let out = ves(&["validate", "--params", &path]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.ends_with("=true")).count(), 8);
    assert!(!text.contains("false"));
}

#[test]
fn inline_flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_params(dir.path(), "case1.txt", &RawParams::CASE_1);
    let out = ves(&["validate", "--params", &path, "--psi", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("psi_below_one=false"));
    assert!(text.contains("overall=false"));
}

#[test]
fn eval_at_one_returns_scale() {
    let out = ves(&[
        "eval", "--A", "1.05", "--alpha", "0.2", "--beta", "0.8", "--theta", "0.8", "--psi",
        "-0.9", "--omega", "-0.2", "--k", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "k,f,f_prime,f_double_prime,sigma,share");
    let fields: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(fields[1], 1.05);
    assert!((fields[4] - 0.84100).abs() < 1e-5);
}

#[test]
fn eval_writes_requested_grid_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_params(dir.path(), "case2.txt", &RawParams::CASE_2);
    let csv = dir.path().join("rows.csv");
    let out = ves(&[
        "eval",
        "--params",
        &params,
        "--kmin",
        "0.1",
        "--kmax",
        "10",
        "--points",
        "7",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(csv).unwrap().lines().count(), 8);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ves(&["bogus"]).status.code(), Some(2));
    assert_eq!(ves(&["validate", "--nope"]).status.code(), Some(2));
    assert_eq!(
        ves(&["figures", "--case", "3", "--outdir", "x"])
            .status
            .code(),
        Some(2)
    );
    let missing = ves(&["validate", "--A", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());
    let no_file = ves(&["validate", "--params", "/nonexistent/params.txt"]);
    assert_eq!(no_file.status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_three() {
    let out = ves(&[
        "eval", "--A", "1.05", "--alpha", "0.2", "--beta", "0.8", "--theta", "0.8", "--psi", "0.9",
        "--omega", "0.2", "--k", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn inada_reports_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_params(dir.path(), "good.txt", &RawParams::CASE_1);
    let out = ves(&["inada", "--params", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_end().ends_with("summary=PASS"));

    let bad = write_params(
        dir.path(),
        "bad.txt",
        &RawParams::new(1.0, 0.5, 0.5, 0.8, 0.5, 0.5),
    );
    assert_eq!(ves(&["inada", "--params", &bad]).status.code(), Some(1));
    let out = ves(&["inada", "--params", &bad, "--raw"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).trim_end().ends_with("summary=FAIL"));
}

#[test]
fn asym_prints_summary_and_gap_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_params(dir.path(), "case2.txt", &RawParams::CASE_2);
    let out = ves(&["asym", "--params", &path]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("alpha_z=0.98"));
    assert!(text.contains("psi_positive=false"));
    assert!(text.contains("\nk,gap_zero,gap_infinity\n"));
}

#[test]
fn figures_are_byte_identical_across_runs() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    for case in ["1", "2"] {
        for dir in [&first, &second] {
            let out = ves(&[
                "figures",
                "--case",
                case,
                "--outdir",
                dir.path().to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0));
        }
    }
    let mut names: Vec<_> = fs::read_dir(first.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 12);
    for name in names {
        let a = fs::read(first.path().join(&name)).unwrap();
        let b = fs::read(second.path().join(&name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name:?}");
    }
}

#[test]
fn figures_to_unwritable_dir_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("sub");
    let out = ves(&[
        "figures",
        "--case",
        "1",
        "--outdir",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fit_recovers_case2_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let truth = ValidatedParams::case2();
    let data = generate_synthetic(&truth, &Grid::log(0.01, 100.0, 50).unwrap(), 0.0, 0).unwrap();
    let data_path = dir.path().join("data.csv");
    write_observations(&data, fs::File::create(&data_path).unwrap()).unwrap();
    let init = write_params(dir.path(), "init.txt", &RawParams::CASE_2);
    let out_path = dir.path().join("fit.txt");
    let out = ves(&[
        "fit",
        "--data",
        data_path.to_str().unwrap(),
        "--init",
        &init,
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("converged=true"));
    let fitted = RawParams::parse(
        &text.lines().take(6).collect::<Vec<_>>().join("\n"),
        &out_path,
    )
    .unwrap();
    for (x, y) in fitted.values().iter().zip(RawParams::CASE_2.values()) {
        assert!(((x - y) / y).abs() < 1e-6, "{x} vs {y}");
    }
}

#[test]
fn fit_with_init_outside_phi_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let data = generate_synthetic(
        &ValidatedParams::case1(),
        &Grid::log(0.1, 10.0, 20).unwrap(),
        0.0,
        0,
    )
    .unwrap();
    let data_path = dir.path().join("data.csv");
    write_observations(&data, fs::File::create(&data_path).unwrap()).unwrap();
    let init = write_params(
        dir.path(),
        "init.txt",
        &RawParams::new(1.0, 0.2, 0.8, 0.9, 0.9, 0.3),
    );
    let out = ves(&[
        "fit",
        "--data",
        data_path.to_str().unwrap(),
        "--init",
        &init,
    ]);
    assert_eq!(out.status.code(), Some(1));
}
