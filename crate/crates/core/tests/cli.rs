//! End-to-end runs of the `ccpolar` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ccpolar::report::{read_json_payload, LayoutDocument};
use ccpolar::SwapRecord;

fn ccpolar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccpolar"))
        .args(args)
        .output()
        .expect("spawn ccpolar")
}

fn ok(args: &[&str]) -> String {
    let out = ccpolar(args);
    assert!(
        out.status.success(),
        "ccpolar {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(str::to_string)
        .collect()
}

#[test]
fn construct_small_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&[
        "construct",
        "--n",
        "8",
        "--k",
        "4",
        "--threshold",
        "0.5",
        "--out-dir",
        d,
    ]);

    let opt = LayoutDocument::read(&dir.path().join("layout_optimized.json")).unwrap();
    assert_eq!(opt.kinds, "FFFFIIII");
    assert_eq!(opt.z.len(), 8);
    let base: LayoutDocument = read_json_payload(&dir.path().join("layout_baseline.json")).unwrap();
    assert_eq!(base.kinds, "FFFIFIII");
    let swaps: Vec<SwapRecord> = read_json_payload(&dir.path().join("swaps.json")).unwrap();
    assert_eq!(swaps.len(), 1);
    assert_eq!((swaps[0].info_index, swaps[0].frozen_index), (3, 4));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn construct_zero_threshold_keeps_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&[
        "construct",
        "--n",
        "8",
        "--k",
        "4",
        "--threshold",
        "0",
        "--out-dir",
        d,
    ]);
    let opt: LayoutDocument = read_json_payload(&dir.path().join("layout_optimized.json")).unwrap();
    assert_eq!(opt.kinds, "FFFIFIII");
    let swaps: Vec<SwapRecord> = read_json_payload(&dir.path().join("swaps.json")).unwrap();
    assert!(swaps.is_empty());
}

#[test]
fn latency_from_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["latency", "--n", "8", "--k", "4", "--out-dir", d]);
    let rows = data_lines(&dir.path().join("latency.csv"));
    assert_eq!(rows, vec!["8,0.5,0,sum-of-leaves,5,0.00"]);

    let stdout = ok(&[
        "latency",
        "--n",
        "1024",
        "--k",
        "307",
        "--threshold",
        "0",
        "--mode",
        "feedback-cycle",
        "--out-dir",
        d,
    ]);
    assert!(stdout.contains("303 cycles"), "{stdout}");
}

#[test]
fn latency_from_layout_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&[
        "construct",
        "--n",
        "8",
        "--k",
        "4",
        "--threshold",
        "0.5",
        "--out-dir",
        d,
    ]);
    let layout = dir.path().join("layout_optimized.json");
    let lat = dir.path().join("lat");
    let stdout = ok(&[
        "latency",
        "--layout",
        layout.to_str().unwrap(),
        "--out-dir",
        lat.to_str().unwrap(),
    ]);
    assert!(stdout.contains("2 cycles"), "{stdout}");
}

const TINY: &str = r#"{"n": 64, "k": 32, "thresholds": [], "ebno_db": [2.0], "max_frames": 300, "min_frame_errors": 0}"#;

#[test]
fn simulate_minimal_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    fs::write(&cfg, TINY).unwrap();
    let out = dir.path().join("out");
    ok(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    let rows = data_lines(&out.join("sim.csv"));
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("64,0.5,0,2,300,"), "{}", rows[0]);
    let csv = fs::read_to_string(out.join("sim.csv")).unwrap();
    assert!(csv.starts_with("# manifest: manifest.json\n# config: "));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    fs::write(&cfg, TINY).unwrap();
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        ok(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "42",
            "--threshold",
            "1e-3",
            "--workers",
            workers,
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        outputs.push((
            fs::read(out.join("sim.csv")).unwrap(),
            fs::read(out.join("sim.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn key_value_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.cfg");
    fs::write(
        &cfg,
        "n = 32\nrate = 0.5\nthresholds = 0.01\nebno_db = 1.0, 3.0\nmax_frames = 100\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    ok(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    // baseline and one threshold, two points each
    assert_eq!(data_lines(&out.join("sim.csv")).len(), 4);
}

#[test]
fn malformed_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"n": 100, "k": 10}"#).unwrap();
    let out = ccpolar(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    fs::write(&cfg, "n = 64\nthis is not a key value line\n").unwrap();
    let out = ccpolar(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());

    let out = ccpolar(&["construct", "--n", "8", "--k", "9"]);
    assert!(!out.status.success());
}

#[test]
fn sweep_writes_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&[
        "sweep",
        "--n",
        "64,128",
        "--rate",
        "0.5",
        "--threshold",
        "1e-3,0.1",
        "--mode",
        "feedback-cycle",
        "--out-dir",
        d,
    ]);
    let rows = data_lines(&dir.path().join("sweep.csv"));
    // 2 lengths x (baseline + 2 thresholds)
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.contains(",feedback-cycle,")));
}
