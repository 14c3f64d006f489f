use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cablesea_cli::artifact::ControllerFile;
use tempfile::TempDir;

const DEFAULT_CFG: &str = include_str!("../../../paper.cfg");

fn run(dir: &Path, cfg: &str, args: &[&str]) -> Output {
    let cfg_path = dir.join("test.cfg");
    fs::write(&cfg_path, cfg).unwrap();
    Command::new(env!("CARGO_BIN_EXE_cablesea"))
        .arg("--config")
        .arg(&cfg_path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    let start = text.find(key).unwrap_or_else(|| panic!("{key} not in {text}")) + key.len();
    text[start..]
        .split_whitespace()
        .next()
        .unwrap()
        .trim_end_matches(',')
        .parse()
        .unwrap()
}

#[test]
fn tune_velocity_reports_published_gains() {
    let tmp = TempDir::new().unwrap();
    let text = ok(&run(tmp.path(), DEFAULT_CFG, &["tune-velocity"]));
    let kpv = field(&text, "Kpv = ");
    let kiv = field(&text, "Kiv = ");
    assert!((kpv / 0.26 - 1.0).abs() < 0.02, "{kpv}");
    assert!((kiv / 53.5 - 1.0).abs() < 0.02, "{kiv}");
    assert!(field(&text, "rise_time = ") < 2e-3);
    assert!(tmp.path().join("out/fig6_pi.csv").exists());
}

#[test]
fn nonpositive_torque_constant_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let out = run(
        tmp.path(),
        &DEFAULT_CFG.replace("Kt = 0.0525", "Kt = 0"),
        &["tune-velocity"],
    );
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Kt"), "{err}");
}

#[test]
fn synthesize_writes_a_consistent_controller() {
    let tmp = TempDir::new().unwrap();
    let text = ok(&run(tmp.path(), DEFAULT_CFG, &["synthesize"]));
    assert!(field(&text, "(50 frequencies) = ") < 1e-8);
    assert!(text.contains("closed-loop maps stable: yes"));
    assert!(text.contains("omega_bar = 451.24"));
    let file = fs::read_to_string(tmp.path().join("out/controller.txt")).unwrap();
    let parsed = ControllerFile::parse(&file).unwrap();
    assert_eq!(parsed.to_text(), file);
    assert!((parsed.j_star - field(&text, "J* = ")).abs() < 1e-12 * parsed.j_star);
}

#[test]
fn nonminimum_phase_override_is_diagnosed() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!("{DEFAULT_CFG}\n[plant]\nnum = -1 1\nden = 1 3 2\n");
    let out = run(tmp.path(), &cfg, &["synthesize"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(err.contains("minimum"), "{err}");
}

#[test]
fn two_dof_beats_pd_under_noise() {
    let tmp = TempDir::new().unwrap();
    ok(&run(tmp.path(), DEFAULT_CFG, &["simulate", "--scenario", "fig9"]));
    let table = fs::read_to_string(tmp.path().join("out/fig9_compare.txt")).unwrap();
    let row = table.lines().find(|l| l.starts_with("rms_tracking_error")).unwrap();
    let v: Vec<f64> = row.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
    assert!(v[0] < v[1], "{row}");
    let csv = fs::read_to_string(tmp.path().join("out/fig9_2dof.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# dt=1.0000000000000001e-5"));
    assert!(lines.next().unwrap().starts_with("t,r[Nm],"));
}

#[test]
fn step_comparison_and_single_controllers() {
    let tmp = TempDir::new().unwrap();
    ok(&run(
        tmp.path(),
        DEFAULT_CFG,
        &["simulate", "--scenario", "fig8", "--controller", "pd"],
    ));
    let out = tmp.path().join("out");
    assert!(out.join("fig8_pd.csv").exists());
    assert!(!out.join("fig8_2dof.csv").exists());
    assert!(!out.join("fig8_compare.txt").exists());
    let json = fs::read_to_string(out.join("fig8_pd_metrics.json")).unwrap();
    assert!(json.contains("\"settling_time\""));
}

#[test]
fn unknown_scenario_fails() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), DEFAULT_CFG, &["simulate", "--scenario", "nope"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn output_is_deterministic_and_seed_sensitive() {
    let tmp = TempDir::new().unwrap();
    let read = |seed: &str, tag: &str| {
        let dir = tmp.path().join(tag);
        fs::create_dir_all(&dir).unwrap();
        ok(&run(
            &dir,
            DEFAULT_CFG,
            &["--seed", seed, "simulate", "--scenario", "fig9", "--controller", "2dof"],
        ));
        fs::read(dir.join("out/fig9_2dof.csv")).unwrap()
    };
    let a = read("7", "a");
    let b = read("7", "b");
    let c = read("8", "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
}
