use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cooper-oam"))
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["rates", "--config", "fig3", "--set", "grid.bogus=1", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err.is_object(), "{err}");
}

#[test]
fn dm_run_writes_manifest_and_lists_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["dm", "--config", "fig5", "--format", "json", "--threads", "2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let listed = String::from_utf8(out.stdout).unwrap();
    // 19 temperatures × 3 enhancements
    assert_eq!(listed.lines().count(), 57);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "dm");
    for line in listed.lines() {
        assert!(line.ends_with(".json"));
        assert!(std::path::Path::new(line).exists());
    }
}
