use std::path::Path;
use std::process::{Command, Output};

fn tracecum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracecum")).args(args).env_remove("TRACECUM_THREADS").output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn read_rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["N", "r", "mode", "value_re", "value_im", "stderr", "bound", "verdict"]
    );
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn list_builtins_names_everything() {
    let out = tracecum(&["list-builtins"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["upper-bidiagonal-ones", "gue", "goe", "wigner", "exact", "mc", "verify-lemmas", "scaling", "clt"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn verify_lemmas_defaults_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = tracecum(&["verify-lemmas", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_path(dir.path().join("lemmas.lemmas.csv")).unwrap();
    let rows: Vec<_> = r.records().map(|x| x.unwrap()).collect();
    assert!(rows.len() >= 6);
    assert!(rows.iter().all(|row| &row[2] == "0" && &row[3] == "pass"));
}

#[test]
fn exact_gue_square_variance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"mode": "exact", "polynomial": [{"word": [["X", 0], ["X", 0]]}], "n": [2, 3, 4, 5, 6], "r": [2], "output": {"stem": "sq"}}"#,
    );
    let out = tracecum(&["run", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_rows(&dir.path().join("sq.csv"));
    let exact: Vec<_> = rows.iter().filter(|r| &r[2] == "exact").collect();
    assert_eq!(exact.len(), 5);
    for row in exact {
        assert!((row[3].parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
    }
    assert!(rows.iter().filter(|r| &r[2] == "bound-check").all(|r| &r[7] == "pass"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sq.report.json")).unwrap()).unwrap();
    assert!(report["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["config"]["mode"], "exact");
    let plot = std::fs::read_to_string(dir.path().join("sq.logK.r2.dat")).unwrap();
    assert_eq!(plot.lines().count(), 6);
}

#[test]
fn mc_below_sample_floor_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"mode": "mc", "polynomial": [{"word": [["X", 0], ["X", 0]]}], "n": [4], "r": [4], "samples": 100}"#,
    );
    let out = tracecum(&["run", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size limit"));
}

#[test]
fn unbound_symbol_reports_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"mode": "exact", "polynomial": [{"word": [["X", 0], ["D", 9]]}], "n": [3], "r": [1]}"#);
    let out = tracecum(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/polynomial/0/word/1") && err.contains("D9"), "{err}");
}

#[test]
fn single_thread_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"mode": "mc", "model": "wigner", "polynomial": [{"word": [["X", 0], ["D", 0], ["X", 0], ["D", 0]]}],
            "deterministic": ["diag-alternating-signs"], "n": [3, 5], "r": [1, 2, 3], "samples": 4000, "seed": 3}"#,
    );
    let mut bytes = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let out = tracecum(&["--single-thread", "run", &cfg, "--out", out_dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        bytes.push(std::fs::read(out_dir.join("run.csv")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    // a different seed changes the estimates
    let out_dir = dir.path().join("c");
    tracecum(&["--single-thread", "run", &cfg, "--seed", "4", "--out", out_dir.to_str().unwrap()]);
    assert_ne!(std::fs::read(out_dir.join("run.csv")).unwrap(), bytes[0]);
}

#[test]
fn wigner_scaling_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"mode": "scaling", "model": "wigner", "polynomial": [{"word": [["X", 0], ["D", 0]]}],
            "deterministic": ["upper-bidiagonal-ones"], "n": [4, 8, 16, 32], "r": [2, 4], "output": {"gnuplot": true}}"#,
    );
    let out = tracecum(&["run", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_rows(&dir.path().join("run.csv"));
    let fits: Vec<_> = rows.iter().filter(|r| &r[2] == "bound-check").collect();
    assert_eq!(fits.len(), 2);
    assert!(fits.iter().all(|r| &r[7] == "consistent" && r[0].is_empty()));
    for r in [2, 4] {
        assert!(dir.path().join(format!("run.logK.r{r}.dat")).exists());
    }
    assert!(dir.path().join("run.gp").exists());
}

#[test]
fn failed_fit_exits_with_two() {
    // K₂(Tr XD) = (2N − 1)/(12N) still rises at N ≤ 4, so a zero-tolerance
    // check of the flat asymptotic order fails
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"mode": "scaling", "model": "wigner", "polynomial": [{"word": [["X", 0], ["D", 0]]}],
            "deterministic": ["upper-bidiagonal-ones"], "n": [2, 3, 4], "r": [2], "scaling_tol": 0.0}"#,
    );
    let out = tracecum(&["run", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let rows = read_rows(&dir.path().join("run.csv"));
    assert!(rows.iter().any(|r| &r[7] == "inconsistent"));
}

#[test]
fn clt_run_writes_tail_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"mode": "clt", "polynomial": [{"word": [["X", 0]]}, {"word": [["X", 0], ["X", 0]]}], "n": [6], "samples": 10000}"#,
    );
    let out = tracecum(&["run", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(dir.path().join("run.clt.N6.dat")).unwrap();
    let lines: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(lines.len(), 11);
    assert!(lines.iter().all(|l| l.split_whitespace().count() == 3));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.report.json")).unwrap()).unwrap();
    assert!(report["clt"][0]["diagnostics"]["ks"].as_f64().unwrap() < 0.1);
}

#[test]
fn non_self_adjoint_clt_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"mode": "clt", "polynomial": [{"word": [["X", 0]], "coeff": [0, 1]}], "n": [6], "samples": 10000}"#,
    );
    let out = tracecum(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(C3)"));
}
