//! `mhdlab simulate <config>`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use mhdlab::diagnostics::{report_text, write_full_csv, write_ledger_csv, LedgerError, NormLedger};
use mhdlab::lp::DyadicLayout;
use mhdlab::solver::{run as solve, MHDState, RunEvent, SolverConfig, SolverError};

use crate::manifest::{config_echo, wall_clock, RunManifest};
use crate::{CliError, Outcome};

pub const THREADS_VAR: &str = "MHDLAB_THREADS";
pub const LEDGER: &str = "ledger.csv";
pub const LEDGER_FULL: &str = "ledger_full.csv";
pub const REPORT: &str = "report.txt";
pub const CONFIG_ECHO: &str = "config.cfg";
pub const SNAPSHOT_DIR: &str = "snapshots";
/// Present when the run stopped before `t_end`; holds the reason.
pub const TRUNCATED: &str = "TRUNCATED";

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Run configuration (`key = value` lines).
    pub config: PathBuf,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn snapshot_name(step: usize) -> String {
    format!("snap_{step:06}.bin")
}

/// Thread cap from the environment; 1 when unset.
pub fn thread_cap() -> Result<usize, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    fn create(dir: PathBuf) -> Result<Self, CliError> {
        let snaps = dir.join(SNAPSHOT_DIR);
        fs::create_dir_all(&snaps).map_err(CliError::file(&snaps))?;
        // leftovers from an earlier run in the same place would mix into verify
        for entry in fs::read_dir(&snaps).map_err(CliError::file(&snaps))? {
            let p = entry?.path();
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.starts_with("snap_") && name.ends_with(".bin") {
                fs::remove_file(&p).map_err(CliError::file(&p))?;
            }
        }
        for stale in [TRUNCATED, crate::manifest::MANIFEST] {
            let p = dir.join(stale);
            if p.exists() {
                fs::remove_file(&p).map_err(CliError::file(&p))?;
            }
        }
        Ok(Self {
            dir,
            files: Vec::new(),
        })
    }

    fn write(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(CliError::file(&path))?;
        let mut w = BufWriter::new(file);
        body(&mut w)
            .and_then(|_| w.flush())
            .map_err(CliError::file(&path))?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(())
    }

    fn snapshot(&mut self, step: usize, s: &MHDState) -> Result<(), CliError> {
        let name = format!("{SNAPSHOT_DIR}/{}", snapshot_name(step));
        let path = self.dir.join(&name);
        let file = File::create(&path).map_err(CliError::file(&path))?;
        let mut w = BufWriter::new(file);
        s.write_snapshot(&mut w)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        w.flush().map_err(CliError::file(&path))?;
        self.files.push(name);
        Ok(())
    }
}

fn write_blocks(out: &mut Output, layout: &DyadicLayout, s: &MHDState) -> Result<(), CliError> {
    let pa = s.a_pert();
    let tables = [
        ("blocks_u.csv", layout.table(&[&s.u.x, &s.u.y])),
        ("blocks_H.csv", layout.table(&[&s.h.x, &s.h.y])),
        (
            "blocks_A.csv",
            layout.table(&[&pa[0][0], &pa[0][1], &pa[1][0], &pa[1][1]]),
        ),
    ];
    for (name, t) in tables {
        out.write(name, |w| t.write_csv(w))?;
    }
    Ok(())
}

/// Failures of the initial data rather than of the config syntax.
fn is_init_failure(e: &SolverError) -> bool {
    matches!(
        e,
        SolverError::InitNonConvergence { .. }
            | SolverError::InitResidual { .. }
            | SolverError::DivergentMagneticData { .. }
            | SolverError::IncompatibleMagneticData { .. }
    )
}

pub fn run(args: &SimulateArgs) -> Result<Outcome, CliError> {
    let mut cfg = SolverConfig::from_file(&args.config)?;
    if let Some(dir) = &args.out {
        cfg.out_dir = dir.clone();
    }
    let threads = thread_cap()?;
    simulate(&cfg, threads)
}

type Observer<'o> = dyn FnMut(RunEvent<'_>) -> Result<(), SolverError> + 'o;

/// Runs `cfg` and writes its artifacts into `cfg.out_dir`.
pub fn simulate(cfg: &SolverConfig, threads: usize) -> Result<Outcome, CliError> {
    simulate_with(cfg, threads, |cfg, obs| solve(cfg, obs))
}

/// As [`simulate`] with the integration supplied by `runner`.
fn simulate_with<R>(cfg: &SolverConfig, threads: usize, runner: R) -> Result<Outcome, CliError>
where
    R: FnOnce(&SolverConfig, &mut Observer<'_>) -> Result<MHDState, SolverError>,
{
    let started = wall_clock();
    let mut out = Output::create(cfg.out_dir.clone())?;
    let layout = DyadicLayout::new(cfg.grid);
    let mut ledger = NormLedger::new(layout.clone());
    let mut ledger_err: Option<LedgerError> = None;
    // latest observed state and whether its snapshot is already on disk
    let mut latest: Option<(usize, MHDState, bool)> = None;
    let mut io_err: Option<CliError> = None;

    let result = runner(cfg, &mut |ev: RunEvent<'_>| {
        if let Err(e) = ledger.record(ev.state) {
            ledger_err = Some(e);
            return Err(SolverError::Io(std::io::Error::other(
                "ledger rejected a row",
            )));
        }
        let keep = cfg.snapshots || ev.step == 0;
        if keep {
            if let Err(e) = out.snapshot(ev.step, ev.state) {
                io_err = Some(e);
                return Err(SolverError::Io(std::io::Error::other(
                    "snapshot write failed",
                )));
            }
        }
        latest = Some((ev.step, ev.state.clone(), keep));
        Ok(())
    });
    if let Some(e) = io_err {
        return Err(e);
    }

    let (status, message) = match (result, ledger_err) {
        (_, Some(e)) => ("blow-up", Some(format!("ledger stopped: {e}"))),
        (Ok(_), None) => ("completed", None),
        (Err(SolverError::BlowUp(r)), None) => ("blow-up", Some(r.to_string())),
        (Err(e), None) if is_init_failure(&e) => ("init-failure", Some(e.to_string())),
        (Err(e @ SolverError::StabilityLimit { .. }), None) => {
            return Err(CliError::Usage(format!("time.dt: {e}")))
        }
        (Err(e), None) => return Err(e.into()),
    };

    // with snapshots off the first and the last state are still written
    if let Some((step, s, false)) = &latest {
        out.snapshot(*step, s)?;
    }
    let rows = ledger.rows().to_vec();
    out.write(LEDGER, |w| write_ledger_csv(w, &rows))?;
    out.write(LEDGER_FULL, |w| write_full_csv(w, &rows))?;
    if let Some((_, s, _)) = &latest {
        write_blocks(&mut out, &layout, s)?;
    }
    let text = cfg.to_text();
    out.write(CONFIG_ECHO, |w| w.write_all(text.as_bytes()))?;
    let mut report = report_text(&rows);
    if let Some(m) = &message {
        report = format!("status: {status}\n{m}\n\n{report}");
        out.write(TRUNCATED, |w| writeln!(w, "{m}"))?;
    }
    out.write(REPORT, |w| w.write_all(report.as_bytes()))?;

    out.files.sort();
    let manifest = RunManifest {
        tool: "mhdlab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config_echo(&text),
        seed: cfg.init.seed,
        threads,
        started,
        finished: wall_clock(),
        status: status.into(),
        message: message.clone(),
        files: out.files.clone(),
    };
    manifest.write(&out.dir)?;

    match message {
        None => {
            println!(
                "run complete: {} ledger rows, output in {}",
                rows.len(),
                out.dir.display()
            );
            Ok(Outcome::Success)
        }
        Some(m) => {
            eprintln!("{status}: {m}");
            eprintln!("partial output kept in {}", out.dir.display());
            Ok(Outcome::Failure)
        }
    }
}

pub fn snapshot_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let snaps = dir.join(SNAPSHOT_DIR);
    if !snaps.is_dir() {
        return Ok(Vec::new());
    }
    let mut out: Vec<PathBuf> = fs::read_dir(&snaps)
        .map_err(CliError::file(&snaps))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "bin"))
        .collect();
    out.sort();
    Ok(out)
}
