use std::path::Path;
use std::process::{Command, Output};

use aprxlik_core::ising::{brute_force_log_z, IsingParams, LatticeSpec};
use aprxlik_harness::twolevel_figure::run_study;
use aprxlik_harness::{Experiment, ExperimentConfig, GridSpec};

fn aprxlik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aprxlik"))
        .args(args)
        .env_remove("APRXLIK_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn logz_matches_brute_force() {
    let o = aprxlik(&[
        "logz",
        "--rows",
        "4",
        "--cols",
        "4",
        "--beta",
        "0.3",
        "--alpha",
        "0",
        "--boundary",
        "free",
        "--method",
        "transfer",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    let exact = brute_force_log_z(&LatticeSpec::free(4, 4), IsingParams::new(0.0, 0.3)).unwrap();
    assert!((v - exact).abs() < 1e-10 * exact.abs());
}

#[test]
fn logz_accepts_negative_field_and_periodic_kaufman() {
    let o = aprxlik(&[
        "logz", "--rows", "3", "--cols", "3", "--alpha", "-0.2", "--beta", "0.1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = aprxlik(&[
        "logz",
        "--rows",
        "6",
        "--cols",
        "6",
        "--beta",
        "0.2",
        "--boundary",
        "periodic",
        "--method",
        "kaufman",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn missing_config_names_the_path() {
    let o = aprxlik(&["ising-bbeta", "--config", "/definitely/not/here.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/definitely/not/here.json"));
}

#[test]
fn unknown_flag_prints_usage() {
    let o = aprxlik(&["selftest", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn config_for_another_experiment_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"experiment": "ising-contour"}"#).unwrap();
    let o = aprxlik(&["ising-bbeta", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ising-contour"));
}

#[test]
fn numerical_failure_exits_two() {
    let o = aprxlik(&[
        "logz", "--rows", "6", "--cols", "6", "--beta", "0.2", "--method", "brute",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap"));
}

#[test]
fn bad_method_is_a_usage_error() {
    let o = aprxlik(&[
        "logz", "--rows", "2", "--cols", "2", "--beta", "0.2", "--method", "exact",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selftest_is_green() {
    let o = aprxlik(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}

fn run_contour(out: &Path, cfg: &Path, threads: Option<&str>, env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_aprxlik"));
    cmd.args([
        "ising-contour",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    if let Some(t) = threads {
        cmd.args(["--threads", t]);
    }
    match env {
        Some(v) => cmd.env("APRXLIK_THREADS", v),
        None => cmd.env_remove("APRXLIK_THREADS"),
    };
    cmd.output().unwrap()
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"experiment": "ising-contour", "m_list": [30, 40], "k_list": [2, 3, 4], "K_proxy": 8}"#,
    )
    .unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(
        run_contour(&a, &cfg, Some("1"), None).status.code(),
        Some(0)
    );
    assert_eq!(
        run_contour(&b, &cfg, None, Some("3")).status.code(),
        Some(0)
    );
    for f in ["ising_contour.csv", "ising_contour_stability.csv"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap()
        );
    }
}

#[test]
fn threads_flag_overrides_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"experiment": "ising-contour", "m_list": [20], "k_list": [2], "K_proxy": 4}"#,
    )
    .unwrap();
    let out = dir.path().join("o");
    assert_eq!(
        run_contour(&out, &cfg, None, Some("lots")).status.code(),
        Some(1)
    );
    assert_eq!(
        run_contour(&out, &cfg, Some("2"), Some("lots"))
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn csv_fields_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = aprxlik(&["ising-bbeta", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(dir.path().join("ising_bbeta.csv")).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["beta", "b_beta", "b_beta_inv", "beta_c"]
    );
    for rec in rdr.records() {
        for field in rec.unwrap().iter() {
            let v: f64 = field.parse().unwrap();
            assert_eq!(v.to_string(), field);
        }
    }
}

#[test]
fn posterior_grid_half_step_barely_moves_tvd() {
    let base = ExperimentConfig {
        replicates: 30,
        n_list: vec![1000, 10000],
        a_list: vec![0.2, 0.3],
        ..ExperimentConfig::for_experiment(Experiment::TwolevelFigure)
    };
    let fine = ExperimentConfig {
        grid: GridSpec {
            step: base.grid.step / 2.0,
            ..base.grid
        },
        ..base.clone()
    };
    let dir = tempfile::tempdir().unwrap();
    let a = run_study(&base, &dir.path().join("a")).unwrap();
    let b = run_study(&fine, &dir.path().join("b")).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(
            (x.mean_tvd - y.mean_tvd).abs() < 2e-3,
            "{} vs {}",
            x.mean_tvd,
            y.mean_tvd
        );
        assert!((x.rmse_exact - y.rmse_exact).abs() < 1e-6);
    }
}

#[test]
fn invalid_level_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"experiment": "twolevel-figure", "level": 1.5}"#).unwrap();
    let o = aprxlik(&["twolevel-figure", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
