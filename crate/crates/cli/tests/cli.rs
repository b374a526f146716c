use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use mccdma_cli::exit;

fn mccdma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mccdma"))
        .args(args)
        .env_remove("MCCDMA_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> u8 {
    out.status.code().expect("exited normally") as u8
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows after the manifest line, the header and any comments.
fn data_rows(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(str::to_string)
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gamma_star_prints_target() {
    let out = mccdma(&["gamma-star"]);
    assert_eq!(code(&out), exit::OK);
    let text = stdout(&out);
    assert!(text.contains("6.47460038,8.11"), "{text}");
}

#[test]
fn solver_failure_has_its_own_code() {
    let out = mccdma(&["gamma-star", "--exponent", "1"]);
    assert_eq!(code(&out), exit::SOLVER);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sign change"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(code(&mccdma(&["gamma-star", "--tol", "0"])), exit::USAGE);
    assert_eq!(code(&mccdma(&["frobnicate"])), exit::USAGE);
    assert_eq!(code(&mccdma(&["pmf", "--trials", "many"])), exit::USAGE);
}

#[test]
fn malformed_files_are_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "users = 2\nprocessing_gian = 8\n");
    let out = mccdma(&["pmf", "--config", &cfg]);
    assert_eq!(code(&out), exit::USAGE);
    assert!(String::from_utf8_lossy(&out.stderr).contains("processing_gian"));

    let h = write(dir.path(), "h.csv", "1,1\n1,x\n");
    let out = mccdma(&["equilibria", "--channels", &h]);
    assert_eq!(code(&out), exit::USAGE);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = dir.path().join("absent.csv");
    let out = mccdma(&["equilibria", "--channels", missing.to_str().unwrap()]);
    assert_eq!(code(&out), exit::IO);
}

#[test]
fn infeasible_config_has_its_own_code() {
    // two users sharing a carrier with N below γ* cannot meet the target
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "processing_gain = 4\n");
    let h = write(dir.path(), "h.csv", "1\n1\n");
    let out = mccdma(&["dynamics", "--config", &cfg, "--channels", &h]);
    assert_eq!(
        code(&out),
        exit::INFEASIBLE,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn symmetric_channels_have_two_equilibria() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.csv", "# user 1\n1.0, 1.0\n1.0, 1.0\n");
    let out = mccdma(&["equilibria", "--channels", &h]);
    assert_eq!(code(&out), exit::OK);
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("1,1,2,"));
    assert!(rows[1].starts_with("2,2,1,"));
}

#[test]
fn empty_region_reports_no_equilibrium() {
    // Both users strongly prefer carrier 1, which cannot host two at N = 4.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "processing_gain = 4\n");
    let h = write(dir.path(), "h.csv", "10,1\n10,1\n");
    let out = mccdma(&["equilibria", "--config", &cfg, "--channels", &h]);
    assert_eq!(code(&out), exit::NO_EQUILIBRIUM);
    assert!(data_rows(&stdout(&out)).is_empty());

    let out = mccdma(&["dynamics", "--config", &cfg, "--channels", &h]);
    assert_eq!(code(&out), exit::NO_EQUILIBRIUM);
    assert!(stdout(&out).contains("status=no-equilibrium"));
}

#[test]
fn single_user_has_one_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.csv", "0.5,2.0,1.0\n");
    let out = mccdma(&["equilibria", "--channels", &h]);
    assert_eq!(code(&out), exit::OK);
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("1,2,"), "{}", rows[0]);
}

#[test]
fn best_response_picks_strongest_effective_gain() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.csv", "1,2\n4,1\n");
    let p = write(dir.path(), "p.csv", "0,0\n0,1e-15\n");
    let out = mccdma(&[
        "best-response",
        "--channels",
        &h,
        "--user",
        "1",
        "--powers",
        &p,
    ]);
    assert_eq!(code(&out), exit::OK);
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    assert!(rows[0].ends_with(",0"), "{rows:?}");
    assert!(!rows[1].ends_with(",0"), "{rows:?}");

    assert_eq!(
        code(&mccdma(&["best-response", "--channels", &h, "--user", "3"])),
        exit::USAGE
    );
}

#[test]
fn compare_smoke_run_is_fast() {
    let started = Instant::now();
    let out = mccdma(&["compare", "--trials", "1"]);
    assert!(started.elapsed().as_secs_f64() < 1.0);
    assert_eq!(code(&out), exit::OK);
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("2,2,128,1,"));
}

#[test]
fn empty_sweep_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "sweep_processing_gain = []\n");
    let out = mccdma(&["pmf", "--config", &cfg]);
    assert_eq!(code(&out), exit::OK);
    assert!(data_rows(&stdout(&out)).is_empty());
}

#[test]
fn outputs_reproduce_from_their_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "trials = 500\nseed = 42\nsweep_processing_gain = [8, 32]\n",
    );
    let first = dir.path().join("first");
    let out = Command::new(env!("CARGO_BIN_EXE_mccdma"))
        .args(["pmf", "--config", &cfg])
        .env("MCCDMA_OUT_DIR", &first)
        .output()
        .unwrap();
    assert_eq!(code(&out), exit::OK);
    let csv = first.join("pmf.csv");
    let json = first.join("pmf.manifest.json");
    assert!(json.exists());
    let original = std::fs::read_to_string(&csv).unwrap();

    for source in [&csv, &json] {
        let again = mccdma(&["pmf", "--config", source.to_str().unwrap(), "--serial"]);
        assert_eq!(code(&again), exit::OK);
        let rerun = stdout(&again);
        assert_eq!(data_rows(&rerun), data_rows(&original));
    }
    let rows = data_rows(&original);
    assert_eq!(rows.len(), 8);
    let seed_change = mccdma(&["pmf", "--config", csv.to_str().unwrap(), "--seed", "43"]);
    assert_ne!(data_rows(&stdout(&seed_change)), rows);
}
