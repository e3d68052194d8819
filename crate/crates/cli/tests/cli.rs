use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mhdlab::diagnostics::read_ledger_csv;
use mhdlab::solver::MHDState;
use mhdlab::Grid;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mhdlab"));
    c.env_remove("MHDLAB_THREADS");
    c
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

const SMALL: &str = "\
grid.n1 = 16
grid.n2 = 16
grid.l1 = 10
grid.l2 = 10
time.dt = 0.05
time.t_end = 0.2
init.kind = single_mode
init.amplitude = 1e-3
init.mode1 = 1
init.mode2 = 2
output.cadence = 2
output.dir = out
";

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.cfg");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn help_exits_zero_without_side_effects() {
    let dir = tempfile::tempdir().unwrap();
    for sub in [
        "simulate",
        "linear-map",
        "besov",
        "paraproduct-check",
        "verify",
        "report",
    ] {
        let o = run_in(dir.path(), &[sub, "--help"]);
        assert_eq!(code(&o), 0, "{sub}");
        assert!(stdout(&o).contains("Usage"), "{sub}");
    }
    assert_eq!(code(&run_in(dir.path(), &["--help"])), 0);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_in(dir.path(), &["frobnicate"])), 1);
}

#[test]
fn missing_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["simulate", "nope.cfg"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("config not found"), "{}", stderr(&o));
}

#[test]
fn config_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    for (edit, key) in [
        (SMALL.replace("grid.n1 = 16", "grid.n1 = 15"), "grid.n1"),
        (SMALL.replace("time.dt = 0.05", "time.dt = -1"), "time.dt"),
        (
            SMALL.replace("init.mode1 = 1", "init.mode1 = 0"),
            "init.mode1",
        ),
        (SMALL.to_string() + "solver.magic = 3\n", "solver.magic"),
        (SMALL.replace("time.t_end = 0.2\n", ""), "time.t_end"),
        (SMALL.replace("time.dt = 0.05", "time.dt = 50"), "time.dt"),
    ] {
        let cfg = write_config(dir.path(), &edit);
        let o = run_in(dir.path(), &["simulate", cfg.to_str().unwrap()]);
        assert_eq!(code(&o), 1, "{key}");
        assert!(stderr(&o).contains(key), "{key}: {}", stderr(&o));
    }
}

#[test]
fn thread_cap_must_be_positive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let o = bin()
        .current_dir(dir.path())
        .env("MHDLAB_THREADS", "zero")
        .args(["simulate"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("MHDLAB_THREADS"));
}

#[test]
fn zero_length_run_writes_one_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &SMALL.replace("time.t_end = 0.2", "time.t_end = 0"),
    );
    let o = run_in(dir.path(), &["simulate", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let snaps: Vec<_> = fs::read_dir(dir.path().join("out/snapshots"))
        .unwrap()
        .collect();
    assert_eq!(snaps.len(), 1);
    let rows =
        read_ledger_csv(&fs::read_to_string(dir.path().join("out/ledger.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
}

#[test]
fn run_verify_report_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let o = run_in(
        dir.path(),
        &["simulate", cfg.to_str().unwrap(), "--out", "run"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let run = dir.path().join("run");
    for f in [
        "ledger.csv",
        "ledger_full.csv",
        "report.txt",
        "config.cfg",
        "blocks_u.csv",
        "blocks_H.csv",
        "blocks_A.csv",
        "manifest.json",
    ] {
        assert!(run.join(f).is_file(), "{f}");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "completed");
    assert_eq!(manifest["config"]["init.kind"], "single_mode");
    for f in manifest["files"].as_array().unwrap() {
        assert!(run.join(f.as_str().unwrap()).is_file());
    }
    // steps 0, 2, 4
    assert_eq!(fs::read_dir(run.join("snapshots")).unwrap().count(), 3);

    let o = run_in(dir.path(), &["verify", "run"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
    assert!(!stdout(&o).contains("FAIL"));

    let o = run_in(dir.path(), &["report", "run"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("X(T) / X(0)"));

    // corrupt one coefficient of A11 in the middle snapshot
    let snap = run.join("snapshots/snap_000002.bin");
    let mut bytes = fs::read(&snap).unwrap();
    let s = MHDState::read_snapshot(bytes.as_slice()).unwrap();
    let n = s.grid().len();
    let header = 8 + 16 + 24;
    let a11 = header + 4 * (8 + 16 * n) + 8;
    let off = a11 + 16 * 5;
    bytes[off..off + 8].copy_from_slice(&1e-3f64.to_le_bytes());
    fs::write(&snap, bytes).unwrap();
    let o = run_in(dir.path(), &["verify", "run"]);
    assert_eq!(code(&o), 2);
    let out = stdout(&o);
    let failed: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert!(
        failed
            .iter()
            .any(|l| l.contains("snap_000002.bin matches ledger")),
        "{out}"
    );
    assert!(failed.iter().any(|l| l.contains("det_resid")), "{out}");
}

#[test]
fn verify_needs_a_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["verify", "."]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("missing ledger"));
    assert_eq!(code(&run_in(dir.path(), &["report", "."])), 1);
}

fn parse_map(text: &str) -> Vec<(f64, f64, f64, f64, f64, f64, String)> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "xi1,xi2,re_lp,im_lp,re_lm,im_lm,regime"
    );
    lines
        .map(|l| {
            let v: Vec<&str> = l.split(',').collect();
            let f = |i: usize| v[i].parse::<f64>().unwrap();
            (f(0), f(1), f(2), f(3), f(4), f(5), v[6].to_string())
        })
        .collect()
}

#[test]
fn linear_map_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "linear-map",
            "--n1",
            "64",
            "--n2",
            "64",
            "--out",
            "map.csv",
            "--gnuplot",
            "map.gp",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = parse_map(&fs::read_to_string(dir.path().join("map.csv")).unwrap());
    assert_eq!(rows.len(), 64 * 64 - 1);
    assert!(rows.iter().all(|r| r.0 != 0.0 || r.1 != 0.0));
    let mut parabolic = 0;
    for (a, b, lpr, lpi, lmr, lmi, regime) in &rows {
        let n2 = a * a + b * b;
        let scale = n2 + a * a;
        // (λ₊ + λ₋) and λ₊λ₋ recomputed from the printed parts
        let tr = ((lpr + lmr + n2).powi(2) + (lpi + lmi).powi(2)).sqrt();
        let pr = lpr * lmr - lpi * lmi;
        let pi = lpr * lmi + lpi * lmr;
        let det = ((pr - a * a).powi(2) + pi.powi(2)).sqrt();
        assert!(tr.max(det) <= 1e-12 * scale, "{a} {b}");
        let expect = if 2.0 * a.abs() >= n2 {
            "parabolic"
        } else {
            "damped"
        };
        assert_eq!(regime, expect);
        parabolic += (regime == "parabolic") as usize;
    }
    // two unit disks, up to a boundary layer one cell wide
    let d = 1.0 / 16.0;
    let area = 2.0 * std::f64::consts::PI / (d * d);
    let perimeter = 4.0 * std::f64::consts::PI / d;
    assert!(
        (parabolic as f64 - area).abs() <= perimeter,
        "{parabolic} vs {area}"
    );
    let script = fs::read_to_string(dir.path().join("map.gp")).unwrap();
    assert!(script.contains("map.csv"));

    let o = run_in(
        dir.path(),
        &[
            "linear-map",
            "--n1",
            "8",
            "--n2",
            "8",
            "--l1",
            "2pi",
            "--l2",
            "2pi",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(parse_map(&stdout(&o)).len(), 63);
}

fn besov_values(o: &Output) -> Vec<(String, String, f64)> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<&str> = l.split_whitespace().collect();
            (v[0].to_string(), v[1].to_string(), v[2].parse().unwrap())
        })
        .collect()
}

/// Normalized dyadic bump, built from its definition.
fn psi(r: f64) -> f64 {
    let smooth = |x: f64| {
        let x = x.clamp(0.0, 1.0);
        x * x * x * (x * (6.0 * x - 15.0) + 10.0)
    };
    let rho = |r: f64| {
        let (lo, hi) = (5.0 / 6.0, 12.0 / 5.0);
        if r <= lo || r >= hi {
            0.0
        } else if r < 1.0 {
            smooth((r - lo) / (1.0 - lo))
        } else if r <= 2.0 {
            1.0
        } else {
            smooth((hi - r) / (hi - 2.0))
        }
    };
    let denom: f64 = (-60..=60).map(|j| rho(r * 2f64.powi(-j))).sum();
    rho(r) / denom
}

/// `u` of the fixture is `a ê cos(ξ·x)` with `a = 1e-3`, `ξ = (3, 2)/16`.
const FIXTURE_B1_U: f64 = 1.104_154_000_370_535_5e-4;

#[test]
fn besov_fixture_matches_oracle() {
    let path = fixture("single_mode.bin");
    let o = bin()
        .arg("besov")
        .arg(&path)
        .args(["B:1", "BH:1", "HB:1,1", "B:0"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let vals = besov_values(&o);
    let get = |f: &str, s: &str| vals.iter().find(|v| v.0 == f && v.1 == s).unwrap().2;
    let (x1, x2) = (3.0 / 16.0, 2.0 / 16.0);
    let r = f64::hypot(x1, x2);
    let l2 = 1e-3 / 2f64.sqrt();
    let oracle: f64 = (-20..=20)
        .map(|q| 2f64.powi(q) * psi(r * 2f64.powi(-q)) * l2)
        .sum();
    assert!((FIXTURE_B1_U - oracle).abs() <= 1e-12 * oracle, "{oracle}");
    assert!((get("u", "B:1") - FIXTURE_B1_U).abs() <= 1e-12 * oracle);
    // all blocks of a low mode sit in the first regime, so hybrid with s = t is hat
    assert!((get("u", "HB:1,1") - get("u", "BH:1")).abs() <= 1e-15);
    assert!((get("u", "B:0") - l2).abs() <= 1e-15);
    assert_eq!(get("H", "B:1"), 0.0);
    assert_eq!(get("A-I", "BH:1"), 0.0);
    let grid = MHDState::read_snapshot(fs::read(&path).unwrap().as_slice()).unwrap();
    assert_eq!(
        *grid.grid(),
        Grid::square(16, 32.0 * std::f64::consts::PI).unwrap()
    );
}

#[test]
fn besov_zero_snapshot_and_bad_spec() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("zero.bin");
    let s = MHDState::equilibrium(Grid::square(8, 5.0).unwrap());
    s.write_snapshot(fs::File::create(&p).unwrap()).unwrap();
    let o = bin()
        .arg("besov")
        .arg(&p)
        .args(["B:0.5", "HB:0,1", "--field", "u"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(besov_values(&o)
        .iter()
        .all(|v| v.2 == 0.0 && v.2.is_sign_positive() && v.0 == "u"));
    let o = bin().arg("besov").arg(&p).arg("Q:1").output().unwrap();
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("B:s"), "{}", stderr(&o));
    let o = bin()
        .arg("besov")
        .arg(dir.path().join("missing.bin"))
        .arg("B:1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn paraproduct_check_passes() {
    let o = bin()
        .args([
            "paraproduct-check",
            "--n1",
            "32",
            "--n2",
            "32",
            "--pairs",
            "3",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).lines().any(|l| l.starts_with("PASS")));
    let o = bin()
        .args(["paraproduct-check", "--pairs", "0"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}
