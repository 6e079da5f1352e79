//! Drives the `wave` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn wave(root: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wave")).args(args).env("WAVE_OUTPUT_ROOT", root).output().expect("spawn wave")
}

fn run_config(root: &TempDir, name: &str, text: &str) -> Output {
    let cfg = root.path().join(format!("{name}.cfg"));
    fs::write(&cfg, text).unwrap();
    wave(root.path(), &["run", cfg.to_str().unwrap()])
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(dir: &Path) -> String {
    fs::read_to_string(dir.join("report.txt")).unwrap()
}

#[test]
fn zero_data_stays_zero() {
    let root = TempDir::new().unwrap();
    let out = run_config(
        &root,
        "zero",
        "scenario = zero\ngrid.n_x = 256\ngrid.n_xi = 512\ntime.T = 0.5\ntime.dt = 0.01\nchecks = energy\noutput_dir = z\n",
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let series = fs::read_to_string(root.path().join("z/series.csv")).unwrap();
    let rows: Vec<&str> = series.lines().skip(1).collect();
    assert!(!rows.is_empty());
    for row in rows {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(&cols[1..], &[0.0, 0.0, 0.0], "{row}");
    }
}

#[test]
fn peakon_collision_writes_a_run_directory() {
    let root = TempDir::new().unwrap();
    let out = run_config(
        &root,
        "pc",
        "scenario = peakon_collision\ngrid.n_x = 2048\ngrid.n_xi = 4096\ntime.T = 0.5\ntime.dt = 0.01\nchecks = energy\n",
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = root.path().join("runs/peakon_antipeakon");
    assert!(stdout(&out).contains(&format!("output={}", dir.display())));
    assert!(dir.join("series.csv").is_file());
    assert!(dir.join("snapshots/lagrangian_0000.csv").is_file());
    let r = report(&dir);
    assert!(r.lines().any(|l| l.starts_with("energy_drift_rel")), "{r}");
    assert!(r.contains("check_energy = pass") || r.contains("check_energy=pass"), "{r}");

    let check = wave(root.path(), &["check", dir.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
    assert!(stdout(&check).contains("energy=pass"));
}

#[test]
fn breaking_run_stops_cleanly_at_blowup() {
    let root = TempDir::new().unwrap();
    let out = run_config(
        &root,
        "br",
        "scenario = breaking\nscenario.slope = 3\nsolver = eulerian\ngrid.n_x = 1024\ntime.T = 6\ntime.dt = 0.001\ntime.sample_every = 500\noutput_dir = br\n",
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("stop_reason=blowup_detected"), "{}", stdout(&out));
    let dir = root.path().join("br");
    assert!(report(&dir).contains("blowup_detected"));
    assert_eq!(wave(root.path(), &["check", dir.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn runs_are_deterministic() {
    let text = |d: &str| {
        format!("scenario = gaussian\nsolver = both\ngrid.n_x = 256\ngrid.n_xi = 512\ntime.T = 0.2\ntime.dt = 0.01\noutput_dir = {d}\n")
    };
    let root = TempDir::new().unwrap();
    for d in ["a", "b"] {
        assert_eq!(run_config(&root, d, &text(d)).status.code(), Some(0));
    }
    let (a, b) = (root.path().join("a"), root.path().join("b"));
    for f in ["series.csv", "series_eulerian.csv", "snapshots/lagrangian_0001.csv", "snapshots/eulerian_0001.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn scenarios_are_listed() {
    let root = TempDir::new().unwrap();
    let out = wave(root.path(), &["scenarios"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["gaussian", "peakon", "peakon_antipeakon", "breaking", "mollified_peakon", "zero"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn bad_config_exits_with_two() {
    let root = TempDir::new().unwrap();
    let out = run_config(&root, "bad", "scenario = gaussian\ntime.dt = -1\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("time.dt must be positive"));

    let out = run_config(&root, "bad2", "scenario = peakon\nsolver = eulerian\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mollified_peakon"));

    let missing = wave(root.path(), &["check", root.path().join("nowhere").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn failing_check_exits_with_one() {
    let root = TempDir::new().unwrap();
    let out = run_config(
        &root,
        "tight",
        "scenario = peakon_antipeakon\ngrid.n_x = 512\ngrid.n_xi = 256\ntime.T = 1\ntime.dt = 0.05\nchecks = energy\ncheck.energy_tol = 1e-15\noutput_dir = t\n",
    );
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("check_energy=fail"));
    assert_eq!(wave(root.path(), &["check", root.path().join("t").to_str().unwrap()]).status.code(), Some(1));
}
