use std::path::Path;
use std::process::{Command, Output};

fn wigner_cs(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wigner-cs"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn wigner-cs")
}

fn golden(name: &str) -> Vec<u8> {
    std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn metric(text: &str, key: &str) -> f64 {
    let table: toml::Table = text.parse().unwrap();
    table["metrics"][key].as_float().unwrap()
}

#[test]
fn generate_vacuum_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = wigner_cs(dir.path(), &["generate", "--d", "3", "--state", "fock", "--level", "0"]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(dir.path().join("truth.csv")).unwrap(), golden("vacuum_d3.csv"));
    assert_eq!(std::fs::read(dir.path().join("truth.pgm")).unwrap(), golden("vacuum_d3.pgm"));
}

#[test]
fn measure_matches_golden_plan() {
    let dir = tempfile::tempdir().unwrap();
    let out = wigner_cs(
        dir.path(),
        &["measure", "--d", "7", "--state", "mixed", "--rows", "28", "--mode", "family-random", "--seed", "5"],
    );
    assert!(out.status.success());
    assert_eq!(std::fs::read(dir.path().join("plan.txt")).unwrap(), golden("plan_d7.txt"));
    assert_eq!(std::fs::read(dir.path().join("measurements.csv")).unwrap(), golden("mixed_d7.csv"));
}

#[test]
fn measure_then_reconstruct_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(wigner_cs(p, &["generate", "--d", "5", "--state", "random", "--seed", "3", "--rank", "2"]).status.success());
    assert!(wigner_cs(p, &["measure", "--wigner", "truth.csv", "--rows", "30", "--seed", "3"]).status.success());
    let out = wigner_cs(
        p,
        &["reconstruct", "--plan-in", "plan.txt", "--measurements-in", "measurements.csv", "--truth", "truth.csv", "--metrics", "metrics.toml"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics = std::fs::read_to_string(p.join("metrics.toml")).unwrap();
    assert!(metric(&metrics, "relative_l2") <= 1e-4);
    let report = std::fs::read_to_string(p.join("report.toml")).unwrap();
    assert!(report.contains("count = 30"));
    assert!(report.contains("kind = \"from-file\""));
}

#[test]
fn full_data_reconstruction_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = wigner_cs(dir.path(), &["reconstruct", "--rows", "380", "--metrics", "metrics.toml"]);
    assert!(out.status.success());
    let metrics = std::fs::read_to_string(dir.path().join("metrics.toml")).unwrap();
    assert!(metric(&metrics, "relative_l2") <= 1e-4);
}

#[test]
fn compare_writes_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(wigner_cs(p, &["generate", "--d", "3", "--state", "mixed", "--csv", "a.csv", "--pgm", "a.pgm"]).status.success());
    let out = wigner_cs(p, &["compare", "--truth", "a.csv", "--estimate", "a.csv"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(p.join("metrics.toml")).unwrap();
    assert_eq!(metric(&text, "relative_l2"), 0.0);
    assert_eq!(metric(&text, "support_jaccard"), 1.0);
}

#[test]
fn reproduce_fig1_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = wigner_cs(dir.path(), &["reproduce-fig1", "--seed", "7", "--out-dir", "fig1"]);
    assert!(out.status.success());
    let fig = dir.path().join("fig1");
    for f in ["truth.pgm", "recovered.pgm", "truth.csv", "recovered.csv"] {
        assert!(fig.join(f).exists(), "{f}");
    }
    let report = std::fs::read_to_string(fig.join("report.toml")).unwrap();
    assert!(report.contains("count = 285"));
    assert!(report.contains("d = 19"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("rows=285"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let code = |args: &[&str]| wigner_cs(p, args).status.code();
    assert_eq!(code(&["generate", "--frobnicate"]), Some(2));
    assert_eq!(code(&["generate", "--state", "fock", "--rank", "2"]), Some(2));
    assert_eq!(code(&["measure", "--d", "9", "--state", "mixed"]), Some(2));
    assert_eq!(code(&["measure", "--mode", "family-random", "--rows", "284"]), Some(2));
    assert_eq!(code(&["generate", "--csv", "missing/dir/x.csv"]), Some(4));
    assert_eq!(code(&["reconstruct", "--d", "3", "--state", "mixed", "--rows", "12", "--delta", "10"]), Some(3));
    let out = wigner_cs(p, &["generate", "--d", "4"]);
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
}
