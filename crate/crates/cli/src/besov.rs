//! `mhdlab besov <snapshot> <spec>...`.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use mhdlab::lp::{BlockTable, DyadicLayout};
use mhdlab::solver::{parse_real, MHDState};

use crate::{CliError, Outcome};

pub const SPEC_USAGE: &str =
    "norm specifiers: B:s (Besov), BH:s (hat), HB:s,t (hybrid), e.g. B:1 BH:0 HB:0,1";

/// One requested norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    Besov(f64),
    Hat(f64),
    Hybrid(f64, f64),
}

impl NormSpec {
    pub fn parse(raw: &str) -> Result<Self, String> {
        let bad = || format!("unknown norm specifier {raw:?}; {SPEC_USAGE}");
        let (kind, args) = raw.split_once(':').ok_or_else(bad)?;
        let nums: Result<Vec<f64>, String> = args.split(',').map(parse_real).collect();
        let nums = nums.map_err(|e| format!("{e}; {SPEC_USAGE}"))?;
        match (kind, nums.as_slice()) {
            ("B", [s]) => Ok(NormSpec::Besov(*s)),
            ("BH", [s]) => Ok(NormSpec::Hat(*s)),
            ("HB", [s, t]) => Ok(NormSpec::Hybrid(*s, *t)),
            _ => Err(bad()),
        }
    }

    pub fn eval(&self, table: &BlockTable) -> f64 {
        match *self {
            NormSpec::Besov(s) => table.besov(s),
            NormSpec::Hat(s) => table.hat(s),
            NormSpec::Hybrid(s, t) => table.hybrid(s, t),
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Besov(s) => write!(f, "B:{s}"),
            NormSpec::Hat(s) => write!(f, "BH:{s}"),
            NormSpec::Hybrid(s, t) => write!(f, "HB:{s},{t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldGroup {
    /// velocity
    U,
    /// magnetic perturbation
    #[value(name = "H")]
    H,
    /// A − I
    #[value(name = "A")]
    A,
}

#[derive(Args, Debug)]
#[command(after_help = SPEC_USAGE)]
pub struct BesovArgs {
    /// Snapshot written by `simulate`.
    pub snapshot: PathBuf,
    /// Norms to evaluate.
    #[arg(required = true, value_parser = NormSpec::parse)]
    pub specs: Vec<NormSpec>,
    /// Field groups to measure; all three by default.
    #[arg(long, value_enum)]
    pub field: Vec<FieldGroup>,
}

/// Block table of a field group; vector components enter the `ℓ²` sum.
pub fn group_table(layout: &DyadicLayout, s: &MHDState, group: FieldGroup) -> BlockTable {
    match group {
        FieldGroup::U => layout.table(&[&s.u.x, &s.u.y]),
        FieldGroup::H => layout.table(&[&s.h.x, &s.h.y]),
        FieldGroup::A => {
            let p = s.a_pert();
            layout.table(&[&p[0][0], &p[0][1], &p[1][0], &p[1][1]])
        }
    }
}

pub fn run(args: &BesovArgs) -> Result<Outcome, CliError> {
    let f = File::open(&args.snapshot).map_err(CliError::file(&args.snapshot))?;
    let state = MHDState::read_snapshot(BufReader::new(f))
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.snapshot.display())))?;
    let layout = DyadicLayout::new(*state.grid());
    let groups = if args.field.is_empty() {
        vec![FieldGroup::U, FieldGroup::H, FieldGroup::A]
    } else {
        args.field.clone()
    };
    println!("t = {:.17e}", state.t);
    for g in groups {
        let table = group_table(&layout, &state, g);
        let name = match g {
            FieldGroup::U => "u",
            FieldGroup::H => "H",
            FieldGroup::A => "A-I",
        };
        for spec in &args.specs {
            println!(
                "{name:<4} {:<12} {:.17e}",
                spec.to_string(),
                spec.eval(&table)
            );
        }
    }
    Ok(Outcome::Success)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_three_kinds() {
        assert_eq!(NormSpec::parse("B:1").unwrap(), NormSpec::Besov(1.0));
        assert_eq!(NormSpec::parse("BH:-0.5").unwrap(), NormSpec::Hat(-0.5));
        assert_eq!(
            NormSpec::parse("HB:0,1").unwrap(),
            NormSpec::Hybrid(0.0, 1.0)
        );
        for bad in ["X:1", "B", "B:1,2", "HB:1", "B:x"] {
            let e = NormSpec::parse(bad).unwrap_err();
            assert!(e.contains("B:s"), "{bad}: {e}");
        }
        assert_eq!(NormSpec::parse("HB:0,1").unwrap().to_string(), "HB:0,1");
    }
}
