use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_anosovlab"));
    c.env_clear();
    c
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

#[test]
fn count_matches_golden_table() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["count", "--config"])
        .arg(configs().join("schottky.toml"))
        .arg("--out")
        .arg(out.path())
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let got = std::fs::read(out.path().join("counting.csv")).unwrap();
    let want = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/schottky_counting.csv")).unwrap();
    assert!(got == want, "counting.csv differs from the golden table");
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.path().join("count.json")).unwrap()).unwrap();
    assert_eq!(json["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(json["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn malformed_row_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "seed = 3\n\n[group]\ndimension = 2\n\n[[group.generator]]\nlabel = \"a\"\nmatrix = \"2 0; 0 0.5 1\"\n",
    )
    .unwrap();
    let out = bin().args(["gap-check", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 8"), "{err}");
}

#[test]
fn zeta_left_of_abscissa_exits_with_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["zeta", "--config"])
        .arg(configs().join("schottky.toml"))
        .arg("--out")
        .arg(dir.path())
        .env("ANOSOVLAB_ZETA_POINTS", "[\"0.5+1i\"]")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("abscissa"));
}

#[test]
fn seed_flag_and_env_agree() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = configs().join("reference.toml");
    let small = [("ANOSOVLAB_AUDIT_BASIC_POINTS", "5"), ("ANOSOVLAB_AUDIT_PERIODIC_CLASSES", "5")];
    let run = |dir: &Path, flag: bool| {
        let mut c = bin();
        c.args(["domain-audit", "--config"]).arg(&cfg).arg("--out").arg(dir).envs(small);
        if flag {
            c.args(["--seed", "9"]);
        } else {
            c.env("ANOSOVLAB_SEED", "9");
        }
        assert!(c.output().unwrap().status.success());
        std::fs::read(dir.join("domain_basic.csv")).unwrap()
    };
    assert_eq!(run(a.path(), true), run(b.path(), false));
}
