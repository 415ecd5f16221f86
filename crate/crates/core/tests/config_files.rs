use std::fs;
use std::path::{Path, PathBuf};

use fowt_core::config::{load_config, RunConfig};
use fowt_core::control::ControllerSpec;
use fowt_core::error::ConfigError;
use tempfile::TempDir;

fn params_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../params/nrel5mw_oc4.toml")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn minimal(dir: &TempDir) -> PathBuf {
    let text = format!("params = {:?}\n\n[scenario]\nduration = 10.0\n", params_path().to_str().unwrap());
    write(dir, "minimal.toml", &text)
}

#[test]
fn minimal_config_loads_with_defaults() {
    let dir = TempDir::new().unwrap();
    let loaded = load_config(&minimal(&dir)).unwrap();
    let cfg = &loaded.config;
    assert_eq!(cfg.scenario.duration, 10.0);
    assert_eq!(cfg.scenario.dt, 0.0125);
    assert_eq!(cfg.controllers.len(), 2);
    assert!(matches!(cfg.controllers[0], ControllerSpec::Gspi(_)));
    assert_eq!(cfg.output_dir, dir.path().join("out"));
    for key in ["output_dir", "scenario.wind", "scenario.dt", "scenario.seed", "limits", "controller", "analysis"] {
        assert!(loaded.applied_defaults.iter().any(|k| k == key), "no default logged for {key}");
    }
    assert!(!loaded.applied_defaults.iter().any(|k| k == "params" || k == "scenario.duration"));
}

#[test]
fn misspelled_key_is_named() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "typo.toml",
        "[scenario]\nduration = 10.0\n\n[scenario.windd]\nmode = \"constant\"\nmean_speed = 12.0\n",
    );
    match load_config(&p) {
        Err(ConfigError::UnknownKey { key, .. }) => assert_eq!(key, "windd"),
        other => panic!("expected an unknown-key error, got {other:?}"),
    }
}

#[test]
fn misspelled_gain_is_named() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "gain.toml", "[scenario]\nduration = 10.0\n\n[[controller]]\nkind = \"gspi\"\nkpp = 2.0\n");
    match load_config(&p) {
        Err(ConfigError::UnknownKey { key, .. }) => assert_eq!(key, "kpp"),
        other => panic!("expected an unknown-key error, got {other:?}"),
    }
}

#[test]
fn serialized_config_reloads_equal() {
    let dir = TempDir::new().unwrap();
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/closedloop_fig5.toml");
    let first = load_config(&shipped).unwrap().config;
    let again = write(&dir, "again.toml", &first.to_toml());
    let second = load_config(&again).unwrap();
    assert_eq!(second.config, first);
    assert!(second.applied_defaults.is_empty(), "{:?}", second.applied_defaults);
    assert_eq!(second.config.hash(), first.hash());
}

#[test]
fn zero_duration_is_rejected() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "zero.toml", "[scenario]\nduration = 0.0\n");
    let err = load_config(&p).unwrap_err();
    assert!(matches!(err, ConfigError::Invalid(ref m) if m.contains("duration")), "{err}");
}

#[test]
fn missing_files_are_reported() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "missing.toml", "params = \"nowhere.toml\"\n[scenario]\nduration = 5.0\n");
    match load_config(&p) {
        Err(ConfigError::MissingFile(path)) => assert_eq!(path, dir.path().join("nowhere.toml")),
        other => panic!("expected a missing-file error, got {other:?}"),
    }
    let p = write(
        &dir,
        "series.toml",
        "[scenario]\nduration = 5.0\n[scenario.wind]\nmode = \"file-series\"\npath = \"gusts.csv\"\n",
    );
    assert!(matches!(load_config(&p), Err(ConfigError::MissingFile(_))));
}

#[test]
fn malformed_text_reports_position() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.toml", "[scenario]\nduration = = 3\n");
    match load_config(&p) {
        Err(ConfigError::Parse { message, .. }) => assert!(message.contains("line 2"), "{message}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn unknown_output_channel_is_rejected() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "chan.toml", "channels = [\"t\", \"surge\", \"surgee\"]\n[scenario]\nduration = 5.0\n");
    assert!(matches!(load_config(&p), Err(ConfigError::Invalid(m)) if m.contains("surgee")));
}

#[test]
fn scenario_hash_ignores_controllers_but_not_seed() {
    let dir = TempDir::new().unwrap();
    let base = load_config(&minimal(&dir)).unwrap().config;
    let mut other = base.clone();
    other.controllers.truncate(1);
    assert_eq!(base.scenario_hash().unwrap(), other.scenario_hash().unwrap());
    assert_ne!(base.hash(), other.hash());
    let mut reseeded: RunConfig = base.clone();
    reseeded.scenario.seed = 9;
    assert_ne!(base.scenario_hash().unwrap(), reseeded.scenario_hash().unwrap());
}
