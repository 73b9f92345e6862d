use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tgirg(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgirg"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn generate(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["generate", "--model", "tgirg", "--n", "3000", "--tau", "2.6"];
    args.extend_from_slice(extra);
    tgirg(&args, dir)
}

#[test]
fn generate_is_reproducible_and_writes_a_manifest() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    assert_eq!(
        generate(a.path(), &["--seed", "5", "--workers", "1"]).status.code(),
        Some(0)
    );
    assert_eq!(
        generate(b.path(), &["--seed", "5", "--workers", "2"]).status.code(),
        Some(0)
    );
    let ga = fs::read_to_string(a.path().join("graph.txt")).unwrap();
    assert_eq!(ga, fs::read_to_string(b.path().join("graph.txt")).unwrap());
    let m = manifest(a.path());
    assert_eq!(m["seed"], 5);
    assert_eq!(m["outputs"][0], "graph.txt");
    let avg = m["results"]["realized_avg_degree"].as_f64().unwrap();
    assert!((avg - 15.0).abs() <= 1.5, "{avg}");
    assert!(m["wall_time_seconds"].as_f64().is_some());
    assert_eq!(m["config"]["generate"]["model"]["model"], "tgirg");
}

#[test]
fn random_seed_is_recorded() {
    let dir = TempDir::new().unwrap();
    assert_eq!(generate(dir.path(), &["--seed", "random"]).status.code(), Some(0));
    assert!(manifest(dir.path())["seed"].as_u64().is_some());
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let out = generate(dir.path(), &["--sigma", "1.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma"));
    assert_eq!(
        tgirg(&["generate", "--model", "nope", "--n", "10"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(tgirg(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(generate(dir.path(), &["--seed", "abc"]).status.code(), Some(2));
    let ok = generate(dir.path(), &["--sigma", "1.7", "--allow-non-power-law"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn io_errors_exit_with_3() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.txt");
    let out = tgirg(&["coeffs", "--input", missing.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1 2\nx y\n").unwrap();
    assert_eq!(
        tgirg(&["coeffs", "--input", bad.to_str().unwrap()], dir.path())
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn analysis_commands_write_their_outputs() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("g.txt");
    fs::write(&input, "% test\n1 2\n2 3\n3 1\n3 4\n4 5\n5 6\n6 4\n1 1\n").unwrap();
    let path = input.to_str().unwrap();

    // six non-isolated vertices cannot support a tail of ten
    let out = tgirg(&["coeffs", "--input", path, "--hill-k", "10"], &dir.path().join("x"));
    assert_eq!(out.status.code(), Some(2));
    let c = dir.path().join("c");
    let out = tgirg(&["coeffs", "--input", path], &c);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let coeffs: Value = serde_json::from_str(&fs::read_to_string(c.join("coeffs.json")).unwrap()).unwrap();
    assert_eq!(coeffs["ingest"]["self_loops"], 1);
    assert!(coeffs["coefficients"]["spearman"].is_number());
    assert_eq!(manifest(&c)["outputs"][0], "coeffs.json");

    let h = dir.path().join("h");
    assert_eq!(
        tgirg(&["heatmaps", "--input", path, "--buckets", "4"], &h)
            .status
            .code(),
        Some(0)
    );
    for f in [
        "joint.csv",
        "conditional.csv",
        "heatmaps.json",
        "joint.svg",
        "conditional.svg",
        "manifest.json",
    ] {
        assert!(h.join(f).is_file(), "{f}");
    }
    let joint = fs::read_to_string(h.join("joint.csv")).unwrap();
    assert_eq!(joint.lines().count(), 5);

    let k = dir.path().join("k");
    assert_eq!(
        tgirg(&["ccdf", "--input", path, "--formats", "csv"], &k).status.code(),
        Some(0)
    );
    assert!(k.join("ccdf.csv").is_file());
    assert!(!k.join("ccdf.svg").exists());
}

#[test]
fn sweep_writes_one_row_per_cell() {
    let dir = TempDir::new().unwrap();
    let out = tgirg(
        &[
            "sweep",
            "--models",
            "tcl,tgirg",
            "--taus",
            "2.5",
            "--sigmas",
            "0.5,1.6",
            "--n",
            "2000",
            "--replicates",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    // sigma 1.6 >= tau - 1 is skipped, leaving one cell per model
    assert_eq!(rows.len(), 2, "{csv}");
}

#[test]
fn validate_reports_pass_lines() {
    let dir = TempDir::new().unwrap();
    let out = tgirg(&["validate", "--suite", "rgg", "--dim", "1", "--n", "3000"], dir.path());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("PASS ")), "{text}");
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("validation.json")).unwrap()).unwrap();
    assert_eq!(report["suite"], "rgg");
    assert_eq!(
        tgirg(&["validate", "--suite", "nope"], dir.path()).status.code(),
        Some(2)
    );
}
