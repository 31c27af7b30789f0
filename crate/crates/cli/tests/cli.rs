//! Black-box tests of the `enbs` binary: flag validation, exit codes,
//! output schemas, and seed-for-seed reproducibility.

use std::process::{Command, Output};

fn enbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enbs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = enbs(args);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn scan_emits_fringe_csv() {
    let csv = stdout(&[
        "scan", "--target", "signal", "--alpha", "10", "--steps", "100",
    ]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("phase_rad,p_bright"));
    assert_eq!(csv.lines().count(), 101);
    assert!(csv.ends_with('\n'));
}

#[test]
fn noisy_scan_adds_counts_column() {
    let csv = stdout(&[
        "scan", "--target", "seed", "--steps", "32", "--noise", "5000", "--seed", "9",
    ]);
    assert!(csv.starts_with("phase_rad,p_bright,counts\n"));
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 3));
}

#[test]
fn noise_without_seed_is_usage_error() {
    let out = enbs(&["scan", "--target", "signal", "--noise", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = enbs(&["scan", "--target", "signal", "--frobnicate", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn guard_violation_exits_one() {
    let out = enbs(&["scan", "--target", "signal", "--r", "0.9"]);
    assert_eq!(out.status.code(), Some(1));
    let out = enbs(&["oracle", "--alpha", "6"]);
    assert_eq!(out.status.code(), Some(1));
    let out = enbs(&["g2", "--fock", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn every_subcommand_documents_itself() {
    for sub in [
        "scan",
        "three-scan",
        "bloch",
        "oracle",
        "dirichlet",
        "slit",
        "g2",
        "spectrum",
        "budget",
    ] {
        let out = enbs(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub} --help");
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("--format"), "{sub} help lists --format");
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = [
        "scan", "--target", "pump", "--steps", "64", "--noise", "30000", "--seed", "42",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn json_scan_echoes_spec_and_seed() {
    let text = stdout(&[
        "scan", "--target", "signal", "--steps", "16", "--noise", "100", "--seed", "5", "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(value["meta"]["seed"], 5);
    assert_eq!(value["data"]["meta"]["noise"]["rng_seed"], 5);
    assert_eq!(value["data"]["meta"]["target"], "signal");
    assert_eq!(value["data"]["points"].as_array().unwrap().len(), 16);

    // parse -> serialize -> parse is a fixed point of the value
    let reparsed: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&value).unwrap()).unwrap();
    assert_eq!(value, reparsed);
}

#[test]
fn budget_prints_methods_numbers() {
    let csv = stdout(&[
        "budget",
        "--occupancy",
        "0.01",
        "--t-int",
        "10ms",
        "--f-rep",
        "250MHz",
    ]);
    assert_eq!(csv, "bins,expected_counts\n2500000,25000\n");
}

#[test]
fn dirichlet_spec_example_runs() {
    let csv = stdout(&["dirichlet", "--M", "4", "--points", "720"]);
    assert!(csv.starts_with("delta_rad,p_bright\n"));
    assert_eq!(csv.lines().count(), 721);
}

#[test]
fn three_scan_reports_equal_visibilities() {
    let csv = stdout(&["three-scan", "--alpha", "10", "--steps", "90"]);
    let vs: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(vs.len(), 3);
    for v in &vs {
        assert!((v - 100.0 / 101.0).abs() < 1e-9, "visibility {v}");
    }
}

#[test]
fn slit_profile_peaks_on_axis() {
    let csv = stdout(&["slit", "--segments", "256", "--points", "11", "--beta-max", "9.42478"]);
    assert!(csv.starts_with("theta_rad,p0\n"));
    let p0: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(p0.len(), 11);
    // central sample is the on-axis maximum
    assert!((p0[5] - 1.0).abs() < 1e-9);
    assert!(p0.iter().all(|p| *p <= 1.0 + 1e-12));
}

#[test]
fn g2_inputs_are_exclusive_and_flat() {
    let out = enbs(&["g2", "--fock", "2", "--coherent-alpha", "1.0"]);
    assert_eq!(out.status.code(), Some(2));

    let csv = stdout(&["g2", "--coherent-alpha", "1.5", "--points", "9"]);
    for line in csv.lines().skip(1) {
        let g2: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((g2 - 1.0).abs() < 1e-12, "coherent g2 {g2}");
    }
}

#[test]
fn bloch_points_sit_on_the_ring() {
    let csv = stdout(&["bloch", "--target", "seed", "--steps", "40"]);
    assert!(csv.starts_with("x,y\n"));
    for line in csv.lines().skip(1) {
        let mut parts = line.split(',');
        let x: f64 = parts.next().unwrap().parse().unwrap();
        let y: f64 = parts.next().unwrap().parse().unwrap();
        assert!(((x * x + y * y).sqrt() - 0.96).abs() < 1e-9);
    }
}

#[test]
fn spectrum_flags_harmonics() {
    let csv = stdout(&["spectrum"]);
    assert!(csv.starts_with("freq_hz,power_db,is_peak\n"));
    let peak_freqs: Vec<f64> = csv
        .lines()
        .skip(1)
        .filter(|l| l.ends_with(",1"))
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    let bin = 250e6 / 64.0;
    for k in 1..=4 {
        let target = k as f64 * 250e6;
        assert!(
            peak_freqs.iter().any(|f| (f - target).abs() <= bin),
            "no peak near {target}"
        );
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join("enbs-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fringe.csv");
    let args = [
        "scan",
        "--target",
        "signal",
        "--steps",
        "24",
        "--output",
        path.to_str().unwrap(),
    ];
    let out = enbs(&args);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let from_file = std::fs::read_to_string(&path).unwrap();
    let direct = stdout(&["scan", "--target", "signal", "--steps", "24"]);
    assert_eq!(from_file, direct);
    std::fs::remove_file(&path).ok();
}

#[test]
fn bad_unit_suffix_is_usage_error() {
    let out = enbs(&[
        "budget",
        "--occupancy",
        "0.01",
        "--t-int",
        "10sec",
        "--f-rep",
        "250MHz",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
