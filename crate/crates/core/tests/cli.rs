use std::path::Path;
use std::process::{Command, Output};

use xywave_core::runner::RunConfig;

fn xywave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xywave")).args(args).output().expect("binary runs")
}

fn data_section(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn small_grid_has_header_and_one_row_per_point() {
    let out = xywave(&["phase-diagram", "--lambda", "0.5:1.5:2", "--beta", "1:10:2", "--no-timestamp"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "lambda,beta,g0,g1,concurrence");
    assert_eq!(data.len(), 5);
    let grid: Vec<(f64, f64)> = data[1..]
        .iter()
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            (v[0], v[1])
        })
        .collect();
    assert_eq!(grid, vec![(0.5, 1.0), (0.5, 10.0), (1.5, 1.0), (1.5, 10.0)]);
}

#[test]
fn reruns_are_byte_identical_regardless_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = ["phase-diagram", "--lambda", "0.8:0.99:12", "--beta", "0.5:40:16"];
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let mut full = args.to_vec();
        full.extend(["--threads", threads, "--out", path.to_str().unwrap()]);
        assert!(xywave(&full).status.success());
    }
    assert_eq!(data_section(&read(&a)), data_section(&read(&b)));

    let mut full = args.to_vec();
    full.extend(["--threads", "3", "--no-timestamp"]);
    let first = xywave(&full);
    let second = xywave(&full);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn metadata_reconstructs_the_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("wave.csv");
    let status = xywave(&[
        "wave",
        "--lambda",
        "0.9",
        "--beta",
        "2:4:3",
        "--x",
        "-1:1",
        "--t",
        "0:1:3",
        "--mode",
        "nonselective",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let text = read(&out);
    let cfg = RunConfig::from_metadata(&text).unwrap();
    assert_eq!(cfg.beta.to_string(), "2:4:3");
    assert_eq!(cfg.x.to_string(), "-1:1");
    assert_eq!(cfg.out.as_deref(), Some(out.as_path()));

    // the recovered configuration, fed back as a file, reproduces the data
    let conf = dir.path().join("wave.conf");
    let again = dir.path().join("again.csv");
    let body: String = cfg.pairs().iter().filter(|(k, _)| k != "out").map(|(k, v)| format!("{k} = {v}\n")).collect();
    std::fs::write(&conf, body).unwrap();
    let status = xywave(&["wave", "--config", conf.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert!(status.status.success());
    assert_eq!(data_section(&text), data_section(&read(&again)));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("pd.conf");
    std::fs::write(&conf, "# sweep\nlambda = 0.5:0.6:2\nbeta = 1:2:2\n").unwrap();
    let out = xywave(&["phase-diagram", "--config", conf.to_str().unwrap(), "--beta", "3", "--no-timestamp"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# lambda=0.5:0.6:2\n"));
    assert!(text.contains("# beta=3\n"));
    assert_eq!(data_section(&text).lines().count(), 3);

    std::fs::write(&conf, "lambda = 0.5\nflavour = strange\n").unwrap();
    let out = xywave(&["phase-diagram", "--config", conf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(xywave(&["phase-diagram", "--beta", "5:1:3"]).status.code(), Some(2));
    assert_eq!(xywave(&["zerotemp", "--lambda", "1.0"]).status.code(), Some(2));
    assert_eq!(xywave(&["wave", "--mode", "sideways"]).status.code(), Some(2));
    assert_eq!(xywave(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(xywave(&["validate", "--n", "14", "--memory-budget", "1"]).status.code(), Some(2));
    // a node budget far too small for the oscillation cannot converge
    let out = xywave(&["wave", "--t", "400", "--nodes", "1", "--tolerance", "1e-15", "--x", "1", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x=1, t=400"));
}

#[test]
fn json_mirrors_csv() {
    let args = ["zerotemp", "--t", "0:5:3", "--x", "-2:2", "--no-timestamp"];
    let csv = String::from_utf8(xywave(&args).stdout).unwrap();
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&xywave(&json_args).stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let csv_rows: Vec<&str> = data_section(&csv).lines().skip(1).map(|_| "").collect();
    assert_eq!(rows.len(), csv_rows.len());
    assert_eq!(doc["columns"][6], "fidelity");
    assert_eq!(doc["metadata"]["command"], "zerotemp");
    assert!(rows.iter().any(|r| r[5].is_null()));
}

#[test]
fn validate_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = xywave(&["validate", "--suite", "zerotemp", "--n", "8", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let doc: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(doc["passed"], true);
    let wave = doc["checks"].as_array().unwrap().iter().find(|c| c["name"] == "wave_vs_single_excitation").unwrap();
    assert!(wave["error"].as_f64().unwrap() < 1e-8);
}
