use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn hrtlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrtlab"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest(dir: &Path, command: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{command}.manifest.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn classify_prints_one_z2() {
    let dir = tempfile::tempdir().unwrap();
    let o = hrtlab(
        dir.path(),
        &[
            "classify",
            "--points",
            "[[0,0],[0,1],[1,0],[1.41421356,0.47140452]]",
        ],
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o), "OneZ2 off=3\n");
    let m = manifest(dir.path(), "classify");
    assert_eq!(m["command"], "classify");
    assert!(m["outputs"]["classify.json"].is_string());
}

#[test]
fn zak_check_prints_five_identities() {
    let dir = tempfile::tempdir().unwrap();
    let o = hrtlab(
        dir.path(),
        &["zak-check", "--window", "gaussian", "--q", "64", "--K", "8"],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    for line in lines {
        let (_, err) = line.split_once(' ').unwrap();
        assert!(err.parse::<f64>().unwrap() <= 1e-8, "{line}");
    }
}

#[test]
fn independence_sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = hrtlab(
        dir.path(),
        &[
            "independence",
            "--window",
            "gaussian",
            "--base",
            "[[0,0],[0,1],[1,0]]",
            "--alpha",
            "0:2:0.1",
            "--beta",
            "0:2:0.1",
        ],
    );
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("independence.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha,beta,min_singular,condition_number,leakage"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 441);
    assert!(rows.iter().all(|r| r[2] > 1e-4));
    // row-major in (alpha, beta)
    assert_eq!((rows[1][0], rows[1][1]), (0.0, 0.1));
    assert_eq!((rows[21][0], rows[21][1]), (0.1, 0.0));
    let pgm = std::fs::read_to_string(dir.path().join("independence.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n21 21\n65535\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        hrtlab(dir.path(), &["no-such-command"]).status.code(),
        Some(2)
    );
    assert_eq!(hrtlab(dir.path(), &["orbit"]).status.code(), Some(2));
    assert_eq!(
        hrtlab(
            dir.path(),
            &[
                "independence",
                "--base",
                "[[0,0]]",
                "--alpha",
                "1:0:1",
                "--beta",
                "0"
            ]
        )
        .status
        .code(),
        Some(2)
    );
    let o = hrtlab(
        dir.path(),
        &["normalize", "--points", "[[0,0],[1,1],[2,2]]"],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Collinear"));
    let o = hrtlab(dir.path(), &["line", "--gamma", "0,0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ZeroDirection"));
    let o = hrtlab(
        dir.path(),
        &[
            "zak-check",
            "--window",
            "box",
            "--q",
            "64",
            "--K",
            "2",
            "--h",
            "1/32",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("GridMismatch"));
}

#[test]
fn config_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"gamma": "1/3,1/2", "n": 50, "eps": 1e-9, "grid_res": 4}"#,
    )
    .unwrap();
    let o = hrtlab(
        dir.path(),
        &["orbit", "--n", "12", "--config", cfg.to_str().unwrap()],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("recurrence 6"));
    let csv = std::fs::read_to_string(dir.path().join("orbit.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    let m = manifest(dir.path(), "orbit");
    assert_eq!(m["parameters"]["orbit"]["n"], 12);
    assert_eq!(m["parameters"]["orbit"]["grid_res"], 4);
    assert_eq!(m["input_digests"].as_object().unwrap().len(), 1);
}

#[test]
fn manifest_replay_reproduces_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let o = hrtlab(
        &a,
        &[
            "flow",
            "--xs",
            "0,sqrt(2)",
            "--cs",
            "0.5,0.5",
            "--xi",
            "-0.7",
            "--n",
            "500",
        ],
    );
    assert!(o.status.success());
    let m = a.join("flow.manifest.json");
    assert!(hrtlab(&b, &["replay", m.to_str().unwrap()])
        .status
        .success());
    for f in ["flow.csv", "flow-summability.csv", "flow.json"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    let (ma, mb) = (manifest(&a, "flow"), manifest(&b, "flow"));
    assert_eq!(ma["parameters"], mb["parameters"]);
    assert_eq!(ma["outputs"], mb["outputs"]);
}

#[test]
fn relations_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = hrtlab(
        dir.path(),
        &["relations", "--values", r#"["sqrt(2)","1+sqrt(2)","1/3"]"#],
    );
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["basis"], serde_json::json!([0]));
    assert_eq!(v["L"], 3);
    assert_eq!(v["relations"][0]["u"], "1/1");
    assert_eq!(v["relations"][1]["u"], "1/3");
    assert_eq!(v["closure"]["torus_dimension"], 1);
}

#[test]
fn line_and_product_commands() {
    let dir = tempfile::tempdir().unwrap();
    let o = hrtlab(
        dir.path(),
        &[
            "line",
            "--gamma",
            "-sqrt(2),sqrt(2)/3",
            "--p",
            "[[1,1,3],[1,2,6]]",
        ],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("winding -3 1") && text.contains("segments 3"));
    let csv = std::fs::read_to_string(dir.path().join("line.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);

    let o = hrtlab(
        dir.path(),
        &[
            "product",
            "--p",
            "[[2,0,0]]",
            "--gamma",
            "0.1,0.2",
            "--n",
            "10",
        ],
    );
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("product.csv")).unwrap();
    let last: Vec<&str> = csv.lines().last().unwrap().split(',').collect();
    assert_eq!(last[0], "10");
    assert!((last[1].parse::<f64>().unwrap() - 10.0 * 2f64.ln()).abs() < 1e-12);
}
