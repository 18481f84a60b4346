use std::process::{Command, Output};

use serde_json::Value;

fn bohrkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohrkit"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn csv_rows(text: &[u8]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text);
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn radius_cesaro_record() {
    let out = bohrkit(&["radius", "cesaro", "--gamma", "0"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["equation"], "cesaro");
    assert_eq!(doc["parameters"]["gamma"], 0.0);
    assert!((doc["radius"].as_f64().unwrap() - 0.5335).abs() <= 5e-4);
    assert!(doc["residual"].as_f64().unwrap().abs() <= 1e-10);
    assert_eq!(doc["converged"], true);
    assert!(doc["iterations"].as_u64().unwrap() > 0);
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn radius_bernardi_and_classic() {
    let doc = stdout_json(&bohrkit(&["radius", "bernardi", "--gamma", "0", "--beta", "1"]));
    assert!((doc["radius"].as_f64().unwrap() - 0.5827).abs() < 2e-4);
    let doc = stdout_json(&bohrkit(&["radius", "bernardi-classic", "--beta", "1", "--m", "1"]));
    assert!((doc["radius"].as_f64().unwrap() - 0.474).abs() < 5e-4);
    assert_eq!(doc["parameters"]["m"], 1);
}

#[test]
fn domain_errors_exit_two() {
    let out = bohrkit(&["radius", "cesaro", "--gamma", "1.0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma must lie in [0,1)"));
    assert!(out.stdout.is_empty());
    assert_eq!(code(&bohrkit(&["radius", "cesaro", "--gamma", "-0.2"])), 2);
    assert_eq!(
        code(&bohrkit(&["radius", "bernardi", "--gamma", "0.1", "--beta", "-1"])),
        2
    );
    assert_eq!(code(&bohrkit(&["radius", "cesaro", "--gamma", "0", "--tol", "0"])), 2);
    assert_eq!(
        code(&bohrkit(&[
            "verify",
            "sharpness",
            "--op",
            "cesaro",
            "--gamma",
            "0",
            "--r",
            "0.50"
        ])),
        2
    );
}

#[test]
fn malformed_flags_exit_one() {
    for args in [
        vec!["radius", "cesaro"],
        vec!["radius", "cesaro", "--gamma", "abc"],
        vec!["radius", "unknown", "--gamma", "0"],
        vec!["radius", "cesaro", "-g", "0"],
        vec!["table", "bogus"],
        vec![],
    ] {
        let out = bohrkit(&args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"), "{args:?}");
    }
    assert_eq!(code(&bohrkit(&["--help"])), 0);
}

#[test]
fn cesaro_sweep_csv() {
    let grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    let out = bohrkit(&["sweep", "--equation", "cesaro", "--parameter", "gamma", "--grid", grid]);
    assert_eq!(code(&out), 0);
    let (header, rows) = csv_rows(&out.stdout);
    assert_eq!(header, ["gamma", "radius", "residual", "iterations"]);
    assert_eq!(rows.len(), 10);
    let gammas: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    let expected: Vec<f64> = grid.split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(gammas, expected);
    let radii: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(radii.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn bernardi_beta_sweep_decreases() {
    let args = [
        "sweep",
        "--equation",
        "bernardi",
        "--parameter",
        "beta",
        "--grid",
        "1,2,5",
        "--gamma",
        "0.2",
    ];
    let out = bohrkit(&args);
    assert_eq!(code(&out), 0);
    let (_, rows) = csv_rows(&out.stdout);
    let radii: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(radii.len(), 3);
    assert!(radii.windows(2).all(|w| w[1] < w[0]), "{radii:?}");
}

#[test]
fn csv_round_trips_to_full_precision() {
    let out = bohrkit(&[
        "sweep",
        "--equation",
        "cesaro",
        "--parameter",
        "gamma",
        "--grid",
        "0,0.25,0.5",
    ]);
    let (_, rows) = csv_rows(&out.stdout);
    for (row, g) in rows.iter().zip(["0", "0.25", "0.5"]) {
        assert_eq!(row[1].split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
        let printed: f64 = row[1].parse().unwrap();
        let single = stdout_json(&bohrkit(&["radius", "cesaro", "--gamma", g]));
        assert_eq!(printed, single["radius"].as_f64().unwrap());
    }
}

#[test]
fn json_sweep_rows() {
    let out = bohrkit(&[
        "sweep",
        "--equation",
        "bernardi",
        "--parameter",
        "gamma",
        "--grid",
        "0,0.5",
        "--beta",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let rows = stdout_json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["gamma"], 0.5);
    assert!(rows[1]["radius"].as_f64().unwrap() > rows[0]["radius"].as_f64().unwrap());
}

#[test]
fn sweep_validation() {
    let base = ["sweep", "--equation", "cesaro", "--parameter", "gamma"];
    assert_eq!(code(&bohrkit(&base)), 1);
    assert_eq!(code(&bohrkit(&[&base[..], &["--grid", ""]].concat())), 1);
    assert_eq!(code(&bohrkit(&[&base[..], &["--grid", "0.3,0.2"]].concat())), 1);
    assert_eq!(code(&bohrkit(&[&base[..], &["--grid", "0.2,0.2"]].concat())), 1);
    let no_beta = [
        "sweep",
        "--equation",
        "bernardi",
        "--parameter",
        "gamma",
        "--grid",
        "0.1",
    ];
    assert_eq!(code(&bohrkit(&no_beta)), 1);
    assert_eq!(code(&bohrkit(&[&base[..], &["--grid", "0.5,1.5"]].concat())), 2);
}

#[test]
fn sweep_writes_to_out_path() {
    let dir = std::env::temp_dir().join(format!("bohrkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let path_str = path.to_str().unwrap();
    let args = [
        "sweep",
        "--equation",
        "cesaro",
        "--parameter",
        "gamma",
        "--grid",
        "0,0.5",
        "--out",
        path_str,
    ];
    let out = bohrkit(&args);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let (_, rows) = csv_rows(&std::fs::read(&path).unwrap());
    assert_eq!(rows.len(), 2);
    std::fs::remove_dir_all(&dir).unwrap();

    let bad = [
        "sweep",
        "--equation",
        "cesaro",
        "--parameter",
        "gamma",
        "--grid",
        "0",
        "--out",
        "/nonexistent/dir/x.csv",
    ];
    assert_eq!(code(&bohrkit(&bad)), 4);
}

#[test]
fn output_is_deterministic() {
    let sweep = [
        "sweep",
        "--equation",
        "bernardi",
        "--parameter",
        "gamma",
        "--grid",
        "0,0.2,0.4,0.6,0.8",
        "--beta",
        "1",
    ];
    let lemma = ["verify", "lemma1", "--gamma", "0.3", "--samples", "300", "--seed", "11"];
    for args in [&sweep[..], &lemma[..]] {
        let a = bohrkit(args);
        let b = Command::new(env!("CARGO_BIN_EXE_bohrkit"))
            .args(args)
            .env("BOHRKIT_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_bohrkit"))
        .args(["radius", "cesaro", "--gamma", "0"])
        .env("BOHRKIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_identities_and_lemma1() {
    let out = bohrkit(&["verify", "identities"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert!(doc["report"]["max_deviation"].as_f64().unwrap() <= 1e-10);

    let out = bohrkit(&["verify", "lemma1", "--gamma", "0.4", "--samples", "1000", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["parameters"]["seed"], 7);
    assert!(doc["report"]["max_ratio"].as_f64().unwrap() <= 1.0 + 1e-9);
}

#[test]
fn verify_sharpness_and_remainder() {
    let out = bohrkit(&["verify", "sharpness", "--op", "cesaro", "--gamma", "0", "--r", "0.55"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["report"]["witness_found"], true);

    let out = bohrkit(&[
        "verify",
        "sharpness",
        "--op",
        "bernardi",
        "--gamma",
        "0",
        "--beta",
        "1",
        "--r",
        "0.62",
    ]);
    assert_eq!(code(&out), 0);

    let out = bohrkit(&[
        "verify",
        "remainder-order",
        "--op",
        "bernardi",
        "--gamma",
        "0.2",
        "--beta",
        "1",
        "--r",
        "0.3",
    ]);
    assert_eq!(code(&out), 0);
    let slope = stdout_json(&out)["report"]["slope"].as_f64().unwrap();
    assert!((1.8..=2.2).contains(&slope));

    let out = bohrkit(&[
        "verify",
        "remainder-order",
        "--op",
        "bernardi",
        "--gamma",
        "0.2",
        "--r",
        "0.3",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn constants_table() {
    let out = bohrkit(&["table", "paper-constants"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = |prefix: &str| text.lines().find(|l| l.starts_with(prefix)).unwrap().to_string();
    assert!(row("bohr gamma=0").contains("0.333333"));
    assert!(row("bohr gamma=0").contains("1/3"));
    assert!(row("cesaro gamma=0").contains("0.533589"));
    assert!(row("cesaro gamma=0").contains("0.5335"));
    assert!(row("bernardi-classic beta=1 m=1").contains("0.474"));
}

#[test]
fn radius_tables_csv() {
    let out = bohrkit(&["table", "theorem1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = csv_rows(&out.stdout);
    assert_eq!(header[1], "cesaro_radius");
    let radii: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(radii.windows(2).all(|w| w[1] > w[0]));

    let out = bohrkit(&["table", "theorem2", "--format", "csv"]);
    let (header, rows) = csv_rows(&out.stdout);
    assert_eq!(header.len(), 5);
    for row in rows {
        let r: Vec<f64> = row[1..].iter().map(|x| x.parse().unwrap()).collect();
        assert!(r.windows(2).all(|w| w[1] < w[0]));
    }
}
