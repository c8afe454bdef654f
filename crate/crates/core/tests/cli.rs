// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use linthresh::io::read_scenario_table;
use linthresh::simulation::{run_scenario, ModelKind, Scenario};

fn linthresh(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linthresh"))
        .args(args)
        .arg("--out-dir")
        .arg(out_dir)
        .env_remove("LINTHRESH_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn estimate_on_bundled_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = linthresh(&["estimate", "--airquality", "--c", "200", "--psi", "1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&dir.path().join("estimate.json"));
    assert_eq!(v["estimate"]["u_hat"], 10.9);
    let refit = &v["estimate"]["refit"]["fit"];
    assert!((refit["alpha"].as_f64().unwrap() - 42.096).abs() < 5e-3);
    assert!((refit["beta"].as_f64().unwrap() + 1.280).abs() < 5e-3);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("u_hat                10.900000"), "{text}");

    let out = linthresh(&["estimate", "--airquality", "--c", "400"], dir.path());
    assert!(out.status.success());
    assert_eq!(json(&dir.path().join("estimate.json"))["estimate"]["u_hat"], 2.3);
}

#[test]
fn csv_input_matches_bundled_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data/airquality.csv");
    let out = linthresh(
        &[
            "estimate", "--input", data, "-x", "Wind", "-y", "Ozone", "--c", "200", "--eta1", "0.02", "--shift", "0",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&dir.path().join("estimate.json"))["estimate"]["u_hat"], 10.9);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        assert!(linthresh(&["profile", "--airquality", "--c", "50"], d).status.success());
        assert!(linthresh(&["sweep", "--airquality", "--grid", "0:1:500"], d)
            .status
            .success());
    }
    for f in ["profile.csv", "profile.svg", "sweep.csv", "plateaus.csv", "sweep.svg"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }
    let plateaus = std::fs::read_to_string(a.path().join("plateaus.csv")).unwrap();
    let values: Vec<&str> = plateaus.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(values.len(), 6, "{plateaus}");
}

#[test]
fn help_for_every_subcommand() {
    for sub in ["estimate", "profile", "sweep", "simulate", "report"] {
        let out = Command::new(env!("CARGO_BIN_EXE_linthresh"))
            .args([sub, "--help"])
            .output()
            .unwrap();
        assert!(out.status.success(), "{sub}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("--out-dir"), "{sub}");
    }
}

#[test]
fn simulate_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.toml");
    std::fs::write(
        &cfg,
        "[defaults]\nnrep = 1\nseed = 42\nmodel = \"linear\"\n\n[[scenario]]\nu0 = 0.5\ndelta = -1.0\nsigma = 0.0\nn = 100\nc = 0.05\n",
    )
    .unwrap();
    let out = linthresh(
        &[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--threads",
            "2",
            "--no-svg",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_scenario_table(&dir.path().join("scenarios.csv")).unwrap();
    let lib = run_scenario(&Scenario {
        model: ModelKind::Linear,
        ..Scenario::new(0.5, -1.0, 0.0, 100, 0.05, 1, 42)
    })
    .unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].emae, Some(lib.emae));
    assert_eq!(rows[0].uhat_median, Some(lib.estimates[0].u_hat));
    assert!(dir.path().join("replicates.csv").exists());
}

#[test]
fn failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "x,y\n1,2\n2,q\n3,4\n4,5\n").unwrap();
    let constant = dir.path().join("const.csv");
    std::fs::write(&constant, "x,y\n1,2\n1,3\n1,4\n1,5\n").unwrap();
    let cases: [(&[&str], i32, &str); 4] = [
        (&["estimate", "--airquality", "--xi", "0.7"], 3, "E_INVALID_CONFIG"),
        (
            &["estimate", "--input", bad.to_str().unwrap(), "-x", "x", "-y", "y"],
            4,
            "E_PARSE",
        ),
        (
            &["estimate", "--input", "/no/such/file.csv", "-x", "x", "-y", "y"],
            5,
            "E_IO",
        ),
        (
            &["estimate", "--input", constant.to_str().unwrap(), "-x", "x", "-y", "y"],
            6,
            "E_NO_CANDIDATES",
        ),
    ];
    for (args, code, tag) in cases {
        let out = linthresh(args, dir.path());
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with(&format!("error[{tag}]")), "{err}");
    }
}
