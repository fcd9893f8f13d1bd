use std::path::Path;
use std::process::{Command, Output};

const SMALL_CHECK: &str = r#"
[check]
inductance = [1.0]
capacitance = [2.0]
resistance_fraction = [0.0, 0.6]
reduced_frequency = [1.0]
spectrum_dim = 256
spectrum_levels = 16
pure_state_dim = 128
pure_state_levels = [0, 1]
characteristic_bases = [[1.0, 1.0, 0.3]]
characteristic_scales = [2.0]
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rlc-thermo"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn small_check_passes_and_zero_tolerance_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL_CHECK);

    let ok = run(&["check", "--config", &cfg]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!(report["tool_version"].is_string());
    assert_eq!(report["config_hash"].as_str().unwrap().len(), 64);
    assert!(!report["checks"].as_array().unwrap().is_empty());
    assert_eq!(report["probes"].as_array().unwrap().len(), 2);

    let strict = run(&["check", "--config", &cfg, "--tolerance", "0"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn check_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL_CHECK);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&[
            "check",
            "--config",
            &cfg,
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        // with --out the summary goes to stdout
        assert!(String::from_utf8_lossy(&o.stdout).contains("all passed"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sweep_entropy_csv_defaults() {
    let o = run(&["sweep-entropy"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "index,L,C,R,beta,omega,S_cf,S_oracle,dSdR_cf,converged,N_used"
    );
    assert_eq!(lines.count(), 100);
}

#[test]
fn sweep_entropy_cross_check_fills_oracle_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "few.toml",
        "[sweep_entropy]\nresistance = [0.0, 0.5]\n",
    );
    let o = run(&["sweep-entropy", "--config", &cfg, "--cross-check", "on"]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    for record in reader.records() {
        let r = record.unwrap();
        let cf: f64 = r[6].parse().unwrap();
        let oracle: f64 = r[7].parse().unwrap();
        assert!((cf - oracle).abs() < 1e-6 * cf, "{cf} vs {oracle}");
        assert_eq!(&r[9], "true");
    }
}

#[test]
fn sweep_and_convergence_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.toml",
        "[sweep]\naxis = \"beta\"\ngrid = [0.5, 1.0, 2.0]\nresistance = 0.5\n\
         observables = [\"entropy\", \"omega\"]\n\
         [convergence]\nresistance = 0.5\nbeta = 1.0\nobservable = \"entropy\"\n",
    );
    let sweep = run(&["sweep", "--config", &cfg, "--format", "json"]);
    assert_eq!(sweep.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&sweep.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);

    let conv = run(&["convergence", "--config", &cfg]);
    assert_eq!(conv.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&conv.stdout).unwrap();
    assert_eq!(v["report"]["converged"], serde_json::Value::Bool(true));
}

#[test]
fn overdamped_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "over.toml",
        "[sweep_entropy]\nresistance = { start = 0.0, stop = 1.5, count = 4 }\n",
    );
    let o = run(&["sweep-entropy", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn near_critical_needs_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let refused = write_config(
        dir.path(),
        "a.toml",
        "[sweep_entropy]\nresistance = [0.9999]\n",
    );
    assert_eq!(
        run(&["sweep-entropy", "--config", &refused]).status.code(),
        Some(2)
    );
    let allowed = write_config(
        dir.path(),
        "b.toml",
        "[sweep_entropy]\nresistance = [0.9999]\nallow_near_critical = true\n",
    );
    assert_eq!(
        run(&["sweep-entropy", "--config", &allowed]).status.code(),
        Some(0)
    );
    // the flag still keeps a 1e-6 margin
    let too_close = write_config(
        dir.path(),
        "c.toml",
        "[sweep_entropy]\nresistance = [0.9999999]\nallow_near_critical = true\n",
    );
    assert_eq!(
        run(&["sweep-entropy", "--config", &too_close])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "u.toml", "[sweep]\nobservables = [\"heat\"]\n");
    assert_eq!(run(&["sweep", "--config", &unknown]).status.code(), Some(2));
    let typo = write_config(
        dir.path(),
        "t.toml",
        "[check]\nresistance_fractions = [0.1]\n",
    );
    assert_eq!(run(&["check", "--config", &typo]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--tolerance", "-1"]).status.code(), Some(2));
    assert_eq!(
        run(&["convergence", "--tolerance", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "--config", "/nonexistent/x.toml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
