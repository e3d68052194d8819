//! `mhdlab linear-map`: the eigenvalue pair of every nonzero grid frequency.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::Args;
use mhdlab::linear::{dispersion_map, ModeReport, Regime};

use crate::{CliError, GridArgs, Outcome};

pub const COLUMNS: &str = "xi1,xi2,re_lp,im_lp,re_lm,im_lm,regime";

/// Tolerance for `λ₊ + λ₋ = −|ξ|²` and `λ₊λ₋ = ξ₁²`, relative to `|ξ|² + ξ₁²`.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Args, Debug)]
pub struct LinearMapArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV destination; standard output when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script plotting the CSV.
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
}

pub fn write_map<W: Write>(mut w: W, map: &[ModeReport]) -> io::Result<()> {
    writeln!(w, "{COLUMNS}")?;
    for m in map {
        writeln!(
            w,
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}",
            m.xi.0,
            m.xi.1,
            m.lambda_plus.re,
            m.lambda_plus.im,
            m.lambda_minus.re,
            m.lambda_minus.im,
            m.regime.label()
        )?;
    }
    Ok(())
}

/// Worst relative violation of the trace and determinant identities.
pub fn identity_defect(map: &[ModeReport]) -> f64 {
    map.iter()
        .map(|m| {
            let (a, b) = m.xi;
            let a2 = a * a + b * b;
            let scale = a2 + a * a;
            let tr = (m.lambda_plus + m.lambda_minus + a2).norm();
            let det = (m.lambda_plus * m.lambda_minus - a * a).norm();
            tr.max(det) / scale
        })
        .fold(0.0, f64::max)
}

fn gnuplot_script(csv: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'xi1'\nset ylabel 'xi2'\nset size ratio -1\n\
         set multiplot layout 1,2\n\
         set title 'Re lambda_-'\n\
         plot '{csv}' using 1:2:5 with points pt 5 ps 0.5 palette notitle\n\
         set title 'regime (1 = parabolic)'\n\
         plot '{csv}' using 1:2:(strcol(7) eq 'parabolic' ? 1 : 0) with points pt 5 ps 0.5 palette notitle\n\
         unset multiplot\n"
    )
}

pub fn run(args: &LinearMapArgs) -> Result<Outcome, CliError> {
    let grid = args.grid.grid()?;
    let map = dispersion_map(&grid);
    match &args.out {
        Some(p) => {
            let f = File::create(p).map_err(CliError::file(p))?;
            let mut w = BufWriter::new(f);
            write_map(&mut w, &map)
                .and_then(|_| w.flush())
                .map_err(CliError::file(p))?;
        }
        None => write_map(io::stdout().lock(), &map)?,
    }
    if let Some(script) = &args.gnuplot {
        let csv = args
            .out
            .as_ref()
            .map_or("linear_map.csv".into(), |p| p.display().to_string());
        std::fs::write(script, gnuplot_script(&csv)).map_err(CliError::file(script))?;
    }
    let parabolic = map.iter().filter(|m| m.regime == Regime::Parabolic).count();
    let (d1, d2) = grid.spacing();
    // the parabolic set 2|ξ₁| ≥ |ξ|² is two unit disks
    let expected = 2.0 * std::f64::consts::PI / (d1 * d2);
    let defect = identity_defect(&map);
    eprintln!(
        "modes: {}  parabolic: {parabolic}  damped: {}",
        map.len(),
        map.len() - parabolic
    );
    eprintln!("parabolic area estimate 2*pi/(dxi1*dxi2) = {expected:.1}");
    eprintln!("trace/determinant identity defect: {defect:.3e}");
    if defect > IDENTITY_TOLERANCE {
        eprintln!("identity defect exceeds {IDENTITY_TOLERANCE:e}");
        return Ok(Outcome::Failure);
    }
    Ok(Outcome::Success)
}
