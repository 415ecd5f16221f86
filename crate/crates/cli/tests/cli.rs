use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fowt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fowt")).args(args).output().expect("binary runs")
}

fn params() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../params/nrel5mw_oc4.toml")
}

fn short_config(dir: &TempDir, extra: &str) -> PathBuf {
    let text = format!(
        "params = {:?}\n{extra}\n[scenario]\nname = \"short\"\nduration = 20.0\nseed = 4\n\n[scenario.wind]\nmode = \"spectral\"\nmean_speed = 18.0\nturbulence_intensity = 0.1\n\n[scenario.wave]\nheight = 3.0\nperiod = 10.0\n\n[scenario.initial]\nsurge = 5.0\npitch_deg = 9.0\nbeta_deg = 7.0\n\n[analysis]\ntrim = 5.0\n",
        params().to_str().unwrap()
    );
    let p = dir.path().join("short.toml");
    fs::write(&p, text).unwrap();
    p
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

#[test]
fn validate_params_reports_balance() {
    let out = fowt(&["validate-params", params().to_str().unwrap()]);
    assert!(out.status.success(), "{}", text(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("parameters valid") && stdout.contains("balance residual"));
}

#[test]
fn openloop_writes_headed_outputs() {
    let dir = TempDir::new().unwrap();
    let cfg = short_config(&dir, "");
    let out_dir = dir.path().join("ol");
    let out = fowt(&["openloop", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", text(&out));
    let trajectory = fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    assert!(trajectory.starts_with("# scenario: short\n"));
    assert!(trajectory.contains("# seed: 4\n") && trajectory.contains("# config_hash: "));
    let stats = fs::read_to_string(out_dir.join("stats.txt")).unwrap();
    assert!(stats.contains("AV(Omega_r) [rpm]"));
}

#[test]
fn worker_count_does_not_change_outputs() {
    let dir = TempDir::new().unwrap();
    let cfg = short_config(&dir, "");
    let run = |jobs: &str, name: &str| {
        let out_dir = dir.path().join(name);
        let out = fowt(&["closedloop", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap(), "--jobs", jobs]);
        assert!(out.status.success(), "{}", text(&out));
        ["manifest.toml", "report.csv", "report.txt", "gspi/trajectory.csv", "rise/trajectory.csv"]
            .map(|f| fs::read(out_dir.join(f)).unwrap())
    };
    assert_eq!(run("1", "one"), run("2", "two"));

    let seeded = dir.path().join("seeded");
    let out = fowt(&["closedloop", "--config", cfg.to_str().unwrap(), "--out", seeded.to_str().unwrap(), "--seed", "5"]);
    assert!(out.status.success(), "{}", text(&out));
    assert_ne!(
        fs::read(seeded.join("rise/trajectory.csv")).unwrap(),
        fs::read(dir.path().join("one/rise/trajectory.csv")).unwrap()
    );

    let cmp = dir.path().join("cmp");
    let out = fowt(&[
        "compare",
        dir.path().join("one/gspi/trajectory.csv").to_str().unwrap(),
        dir.path().join("one/rise/trajectory.csv").to_str().unwrap(),
        "--trim",
        "5",
        "--out",
        cmp.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out));
    let report = fs::read_to_string(cmp.join("report.csv")).unwrap();
    let batch = fs::read_to_string(dir.path().join("one/report.csv")).unwrap();
    assert!(batch.ends_with(&report), "standalone comparison differs from the batch report");
}

#[test]
fn invalid_configurations_fail() {
    let dir = TempDir::new().unwrap();
    let zero = dir.path().join("zero.toml");
    fs::write(&zero, "[scenario]\nduration = 0.0\n").unwrap();
    let out = fowt(&["openloop", "--config", zero.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(text(&out).contains("duration"));

    let typo = dir.path().join("typo.toml");
    fs::write(&typo, "[scenario]\nduration = 5.0\n[scenario.windd]\nmode = \"constant\"\n").unwrap();
    let out = fowt(&["closedloop", "--config", typo.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(text(&out).contains("windd"));

    let out = fowt(&["openloop"]);
    assert!(!out.status.success());
}
