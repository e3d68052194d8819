//! `mhdlab verify <run dir>` and `mhdlab report <run dir>`.

use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use mhdlab::diagnostics::{
    dissipation_budget, dissipation_identity_residual, read_full_csv, read_ledger_csv, report_text,
    vorticity_equation_residuals, x_of_t, LedgerRow, LEDGER_COLUMNS,
};
use mhdlab::lp::DyadicLayout;
use mhdlab::solver::MHDState;

use crate::manifest::RunManifest;
use crate::simulate::{snapshot_files, LEDGER, LEDGER_FULL, TRUNCATED};
use crate::{CliError, Outcome};

/// Ceiling for every structural residual column.
pub const RESIDUAL_BOUND: f64 = 1e-7;
/// `X(t) ≤ X_GROWTH · X(0)` along the run.
pub const X_GROWTH: f64 = 2.0;
/// Ceiling for the relative residual of the dissipation identity.
pub const DISSIPATION_BOUND: f64 = 1e-8;
/// Agreement required between a recomputed row and the stored one.
pub const MATCH_TOLERANCE: f64 = 1e-9;

/// Ledger columns holding structural residuals.
const RESIDUAL_COLUMNS: std::ops::Range<usize> = 6..12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub status: Status,
    pub name: String,
    pub value: Option<f64>,
    pub bound: String,
}

#[derive(Debug, Default)]
struct Table(Vec<Check>);

impl Table {
    fn bound(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        let status = if value <= bound {
            Status::Pass
        } else {
            Status::Fail
        };
        self.0.push(Check {
            status,
            name: name.into(),
            value: Some(value),
            bound: format!("<= {bound:e}"),
        });
    }

    fn flag(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.0.push(Check {
            status,
            name: name.into(),
            value: None,
            bound: detail.into(),
        });
    }

    fn info(&mut self, name: impl Into<String>, value: Option<f64>, detail: impl Into<String>) {
        self.0.push(Check {
            status: Status::Info,
            name: name.into(),
            value,
            bound: detail.into(),
        });
    }

    fn passed(&self) -> bool {
        self.0.iter().all(|c| c.status != Status::Fail)
    }

    fn print(&self) {
        println!("{:<6} {:<52} {:>14}  bound", "status", "check", "value");
        for c in &self.0 {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "info",
            };
            let value = c.value.map_or("-".to_string(), |v| format!("{v:.4e}"));
            println!("{status:<6} {:<52} {value:>14}  {}", c.name, c.bound);
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    a == b
        || (a - b).abs() <= MATCH_TOLERANCE * a.abs().max(b.abs()).max(1e-300)
        || (a - b).abs() <= 1e-300
}

fn ledger_checks(t: &mut Table, rows: &[[f64; 13]]) {
    let increasing = rows.windows(2).all(|w| w[1][0] > w[0][0]);
    t.flag(
        "ledger time strictly increasing",
        increasing,
        format!("{} rows", rows.len()),
    );
    let finite = rows.iter().flatten().all(|v| v.is_finite());
    t.flag("ledger values finite", finite, "");
    for c in RESIDUAL_COLUMNS {
        let m = rows.iter().map(|r| r[c]).fold(0.0, f64::max);
        t.bound(
            format!("{} (ledger max)", LEDGER_COLUMNS[c]),
            m,
            RESIDUAL_BOUND,
        );
    }
    let x0 = rows[0][12];
    let xmax = rows.iter().map(|r| r[12]).fold(0.0, f64::max);
    if x0 > 0.0 {
        let ratio = xmax / x0;
        t.bound("X(t) / X(0) (max)", ratio, X_GROWTH);
    } else {
        t.flag(
            "X(t) stays zero from X(0) = 0",
            xmax == 0.0,
            format!("max X = {xmax:e}"),
        );
    }
    let monotone = rows.windows(2).all(|w| w[1][12] >= w[0][12]);
    t.flag("X(t) non-decreasing", monotone, "");
}

fn full_checks(t: &mut Table, rows: &[[f64; 13]], full: &[LedgerRow]) {
    let same = full.len() == rows.len() && full.iter().zip(rows).all(|(f, r)| f.csv_values() == *r);
    t.flag(
        "ledger_full.csv agrees with ledger.csv",
        same,
        format!("{} rows", full.len()),
    );
    let xs = x_of_t(full);
    let worst = xs
        .iter()
        .zip(full)
        .map(|(x, r)| (x - r.x_t).abs() / x.abs().max(1e-300))
        .fold(0.0, f64::max);
    t.bound(
        "X(t) recomputed from full ledger (rel. diff)",
        worst,
        MATCH_TOLERANCE,
    );
}

fn snapshot_checks(t: &mut Table, dir: &Path, rows: &[[f64; 13]]) -> Vec<MHDState> {
    let files = match snapshot_files(dir) {
        Ok(f) => f,
        Err(e) => {
            t.flag("snapshots readable", false, e.to_string());
            return Vec::new();
        }
    };
    t.flag(
        "snapshots present",
        !files.is_empty(),
        format!("{} files", files.len()),
    );
    let mut states = Vec::new();
    let mut recomputed = [0.0f64; 13];
    let mut layout: Option<DyadicLayout> = None;
    for path in &files {
        let name = path
            .file_name()
            .map_or(String::new(), |n| n.to_string_lossy().into_owned());
        let state = match File::open(path)
            .map_err(|e| e.to_string())
            .and_then(|f| MHDState::read_snapshot(BufReader::new(f)).map_err(|e| e.to_string()))
        {
            Ok(s) => s,
            Err(e) => {
                t.flag(format!("snapshot {name} readable"), false, e);
                continue;
            }
        };
        if !state.is_finite() {
            t.flag(format!("snapshot {name} finite"), false, "");
            continue;
        }
        let lay = layout.get_or_insert_with(|| DyadicLayout::new(*state.grid()));
        if lay.grid() != state.grid() {
            t.flag(
                format!("snapshot {name} grid"),
                false,
                "differs from the first snapshot",
            );
            continue;
        }
        let Some(stored) = rows.iter().find(|r| close(r[0], state.t)) else {
            t.flag(
                format!("snapshot {name} time in ledger"),
                false,
                format!("t = {}", state.t),
            );
            continue;
        };
        let row = LedgerRow::measure(lay, &state).csv_values();
        let off: Vec<&str> = (1..12)
            .filter(|&c| !close(row[c], stored[c]))
            .map(|c| LEDGER_COLUMNS[c])
            .collect();
        if !off.is_empty() {
            t.flag(
                format!("snapshot {name} matches ledger"),
                false,
                format!("differs in {}", off.join(", ")),
            );
        }
        for c in RESIDUAL_COLUMNS {
            recomputed[c] = recomputed[c].max(row[c]);
        }
        states.push(state);
    }
    if !states.is_empty() {
        let mismatched = t.0.iter().any(|c| c.name.ends_with("matches ledger"));
        t.flag(
            "snapshots reproduce their ledger rows",
            !mismatched,
            format!("{} snapshots", states.len()),
        );
        for c in RESIDUAL_COLUMNS {
            t.bound(
                format!("{} (recomputed from snapshots)", LEDGER_COLUMNS[c]),
                recomputed[c],
                RESIDUAL_BOUND,
            );
        }
    }
    states
}

pub fn verify(dir: &Path) -> Result<Outcome, CliError> {
    let path = dir.join(LEDGER);
    if !path.is_file() {
        return Err(CliError::Usage(format!(
            "missing ledger: {}",
            path.display()
        )));
    }
    let text = fs::read_to_string(&path).map_err(CliError::file(&path))?;
    let mut t = Table::default();
    match RunManifest::read(dir) {
        Ok(m) => {
            let missing: Vec<&str> = m
                .files
                .iter()
                .filter(|f| !dir.join(f).is_file())
                .map(|f| f.as_str())
                .collect();
            t.flag(
                "manifest files exist",
                missing.is_empty(),
                missing.join(", "),
            );
            if m.status != "completed" {
                t.flag("manifest status completed", false, m.status.clone());
            }
        }
        Err(e) => t.flag("manifest readable", false, e.to_string()),
    }
    if dir.join(TRUNCATED).exists() {
        let why = fs::read_to_string(dir.join(TRUNCATED)).unwrap_or_default();
        t.flag("run reached t_end", false, why.trim().to_string());
    }
    let rows = match read_ledger_csv(&text) {
        Ok(r) if !r.is_empty() => r,
        Ok(_) => {
            t.flag("ledger has rows", false, "");
            t.print();
            return Ok(Outcome::Failure);
        }
        Err(e) => {
            t.flag("ledger parses", false, e);
            t.print();
            return Ok(Outcome::Failure);
        }
    };
    ledger_checks(&mut t, &rows);
    let full_path = dir.join(LEDGER_FULL);
    let full = match fs::read_to_string(&full_path) {
        Ok(text) => match read_full_csv(&text) {
            Ok(full) => {
                full_checks(&mut t, &rows, &full);
                Some(full)
            }
            Err(e) => {
                t.flag("ledger_full.csv parses", false, e);
                None
            }
        },
        Err(_) => {
            t.info(
                "ledger_full.csv",
                None,
                "absent; X(t) and budget not replayed",
            );
            None
        }
    };
    let states = snapshot_checks(&mut t, dir, &rows);
    if let Some(last) = states.last() {
        match dissipation_identity_residual(&last.a) {
            Ok(v) => t.bound(
                "dissipation identity (last snapshot, rel.)",
                v,
                DISSIPATION_BOUND,
            ),
            Err(e) => t.flag("dissipation identity (last snapshot)", false, e.to_string()),
        }
    }
    if states.len() >= 3 {
        if let Ok(r) = vorticity_equation_residuals(&states) {
            let m = r.into_iter().fold(0.0, f64::max);
            t.info(
                "vorticity equation residual (RMS, max)",
                Some(m),
                "finite-difference in time",
            );
        }
    }
    if let Some(full) = &full {
        let b = dissipation_budget(full);
        if let Some(r) = b.ratio() {
            t.info("dissipation budget lhs / rhs", Some(r), "");
        }
    }
    t.print();
    Ok(if t.passed() {
        println!("verify: all bounds hold");
        Outcome::Success
    } else {
        println!("verify: FAILED");
        Outcome::Failure
    })
}

pub fn report(dir: &Path) -> Result<Outcome, CliError> {
    let path = dir.join(LEDGER_FULL);
    if !path.is_file() {
        return Err(CliError::Usage(format!(
            "missing ledger: {}",
            path.display()
        )));
    }
    let text = fs::read_to_string(&path).map_err(CliError::file(&path))?;
    let rows =
        read_full_csv(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if let Ok(why) = fs::read_to_string(dir.join(TRUNCATED)) {
        println!("run stopped early: {}", why.trim());
    }
    print!("{}", report_text(&rows));
    Ok(Outcome::Success)
}
