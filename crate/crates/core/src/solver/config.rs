//! `key = value` run configuration.
//!
//! ```text
//! # comment
//! grid.n1 = 64            # even mode counts
//! grid.n2 = 64
//! grid.l1 = 32pi          # periods; plain numbers or multiples of pi
//! grid.l2 = 32pi
//! time.dt = 1e-3
//! time.t_end = 1
//! init.kind = random      # zero | single_mode | random
//! init.amplitude = 1e-3
//! init.seed = 7
//! init.mode1 = 1          # single_mode only: centered mode indices
//! init.mode2 = 1
//! toggles.nonlinear = true
//! toggles.evolve_a = true
//! output.cadence = 50     # steps between ledger rows and snapshots
//! output.dir = out
//! output.snapshots = true  # snapshot at every ledger row, else first and last
//! ```
//!
//! `grid.n1`, `grid.n2`, `time.dt` and `time.t_end` are required; the others
//! default as in [`SolverConfig::default_for`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::spectral::{Grid, DEFAULT_LENGTH};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config not found: {0}")]
    NotFound(PathBuf),
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: duplicate key {key}")]
    Duplicate { line: usize, key: String },
    #[error("unknown key {key}")]
    UnknownKey { key: String },
    #[error("missing required key {key}")]
    Missing { key: &'static str },
    #[error("invalid value for {key}: {reason}")]
    Invalid { key: &'static str, reason: String },
}

const KEYS: [&str; 16] = [
    "grid.n1",
    "grid.n2",
    "grid.l1",
    "grid.l2",
    "time.dt",
    "time.t_end",
    "init.kind",
    "init.amplitude",
    "init.seed",
    "init.mode1",
    "init.mode2",
    "toggles.nonlinear",
    "toggles.evolve_a",
    "output.cadence",
    "output.dir",
    "output.snapshots",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    /// `u = 0`, `H = 0`, `A = I`.
    Zero,
    /// One solenoidal Fourier mode in `u` and in `H`.
    SingleMode,
    /// Band-limited random `u` and a random area-preserving label map.
    Random,
}

impl InitKind {
    pub fn name(&self) -> &'static str {
        match self {
            InitKind::Zero => "zero",
            InitKind::SingleMode => "single_mode",
            InitKind::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitConfig {
    pub kind: InitKind,
    pub amplitude: f64,
    pub seed: u64,
    pub mode: (i64, i64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub grid: Grid,
    pub dt: f64,
    pub t_end: f64,
    pub init: InitConfig,
    pub nonlinear: bool,
    pub evolve_a: bool,
    pub cadence: usize,
    pub out_dir: PathBuf,
    /// Write a snapshot at every ledger row (otherwise first and last only).
    pub snapshots: bool,
}

/// A finite real, written plainly or as a multiple of pi (`32pi`, `2*pi`).
pub fn parse_real(raw: &str) -> Result<f64, String> {
    let raw = raw.trim();
    let v = if let Some(head) = raw.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let m = if head.is_empty() {
            1.0
        } else {
            head.parse::<f64>().map_err(|e| format!("{raw:?}: {e}"))?
        };
        m * std::f64::consts::PI
    } else {
        raw.parse::<f64>().map_err(|e| format!("{raw:?}: {e}"))?
    };
    if !v.is_finite() {
        return Err(format!("{raw:?} is not finite"));
    }
    Ok(v)
}

fn parse_float(key: &'static str, raw: &str) -> Result<f64, ConfigError> {
    parse_real(raw).map_err(|reason| ConfigError::Invalid { key, reason })
}

fn parse_bool(key: &'static str, raw: &str) -> Result<bool, ConfigError> {
    match raw {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::Invalid {
            key,
            reason: format!("{raw:?} is not a boolean"),
        }),
    }
}

fn parse_int<T: std::str::FromStr>(key: &'static str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>().map_err(|e| ConfigError::Invalid {
        key,
        reason: format!("{raw:?}: {e}"),
    })
}

impl SolverConfig {
    /// Defaults around a grid: zero initial data, nonlinear terms and `A`
    /// evolution on, a ledger row every step, output to `out`.
    pub fn default_for(grid: Grid, dt: f64, t_end: f64) -> Self {
        Self {
            grid,
            dt,
            t_end,
            init: InitConfig {
                kind: InitKind::Zero,
                amplitude: 0.0,
                seed: 0,
                mode: (1, 1),
            },
            nonlinear: true,
            evolve_a: true,
            cadence: 1,
            out_dir: PathBuf::from("out"),
            snapshots: true,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        if !path.exists() {
            return Err(ConfigError::NotFound(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: n + 1 })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(ConfigError::Syntax { line: n + 1 });
            }
            if !KEYS.contains(&k) {
                return Err(ConfigError::UnknownKey { key: k.to_string() });
            }
            if map.insert(k, v).is_some() {
                return Err(ConfigError::Duplicate {
                    line: n + 1,
                    key: k.to_string(),
                });
            }
        }
        let req = |key: &'static str| map.get(key).copied().ok_or(ConfigError::Missing { key });
        let n1: usize = parse_int("grid.n1", req("grid.n1")?)?;
        let n2: usize = parse_int("grid.n2", req("grid.n2")?)?;
        let l1 = map
            .get("grid.l1")
            .map_or(Ok(DEFAULT_LENGTH), |v| parse_float("grid.l1", v))?;
        let l2 = map
            .get("grid.l2")
            .map_or(Ok(DEFAULT_LENGTH), |v| parse_float("grid.l2", v))?;
        let grid = Grid::new(n1, n2, l1, l2).map_err(|e| ConfigError::Invalid {
            key: if !n1.is_multiple_of(2) || n1 < 2 {
                "grid.n1"
            } else if !n2.is_multiple_of(2) || n2 < 2 {
                "grid.n2"
            } else if !(l1 > 0.0) {
                "grid.l1"
            } else {
                "grid.l2"
            },
            reason: e.to_string(),
        })?;
        let dt = parse_float("time.dt", req("time.dt")?)?;
        let t_end = parse_float("time.t_end", req("time.t_end")?)?;
        let mut cfg = Self::default_for(grid, dt, t_end);
        if let Some(v) = map.get("init.kind") {
            cfg.init.kind = match *v {
                "zero" => InitKind::Zero,
                "single_mode" => InitKind::SingleMode,
                "random" => InitKind::Random,
                other => {
                    return Err(ConfigError::Invalid {
                        key: "init.kind",
                        reason: format!("{other:?} is not one of zero, single_mode, random"),
                    })
                }
            };
        }
        if let Some(v) = map.get("init.amplitude") {
            cfg.init.amplitude = parse_float("init.amplitude", v)?;
        }
        if let Some(v) = map.get("init.seed") {
            cfg.init.seed = parse_int("init.seed", v)?;
        }
        if let Some(v) = map.get("init.mode1") {
            cfg.init.mode.0 = parse_int("init.mode1", v)?;
        }
        if let Some(v) = map.get("init.mode2") {
            cfg.init.mode.1 = parse_int("init.mode2", v)?;
        }
        if let Some(v) = map.get("toggles.nonlinear") {
            cfg.nonlinear = parse_bool("toggles.nonlinear", v)?;
        }
        if let Some(v) = map.get("toggles.evolve_a") {
            cfg.evolve_a = parse_bool("toggles.evolve_a", v)?;
        }
        if let Some(v) = map.get("output.cadence") {
            cfg.cadence = parse_int("output.cadence", v)?;
        }
        if let Some(v) = map.get("output.dir") {
            cfg.out_dir = PathBuf::from(v);
        }
        if let Some(v) = map.get("output.snapshots") {
            cfg.snapshots = parse_bool("output.snapshots", v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key, reason: &str| {
            Err(ConfigError::Invalid {
                key,
                reason: reason.to_string(),
            })
        };
        if !(self.dt > 0.0) {
            return invalid("time.dt", "must be positive");
        }
        if !(self.t_end >= 0.0) {
            return invalid("time.t_end", "must be non-negative");
        }
        if !(self.init.amplitude >= 0.0) {
            return invalid("init.amplitude", "must be non-negative");
        }
        if self.cadence == 0 {
            return invalid("output.cadence", "must be at least 1");
        }
        if self.init.kind == InitKind::SingleMode {
            let (m1, m2) = self.init.mode;
            if m1 == 0 {
                return invalid(
                    "init.mode1",
                    "must be nonzero: a magnetic mode with xi1 = 0 admits no periodic label map",
                );
            }
            if !self
                .grid
                .index_of_mode(m1, m2)
                .is_some_and(|i| self.grid.in_dealias_band(i))
            {
                return invalid("init.mode1", "mode lies outside the dealiased band");
            }
        }
        Ok(())
    }

    /// Canonical `key = value` text; parsing it gives back the same config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let g = &self.grid;
        let _ = writeln!(s, "grid.n1 = {}", g.n1());
        let _ = writeln!(s, "grid.n2 = {}", g.n2());
        let _ = writeln!(s, "grid.l1 = {:?}", g.length1());
        let _ = writeln!(s, "grid.l2 = {:?}", g.length2());
        let _ = writeln!(s, "time.dt = {:?}", self.dt);
        let _ = writeln!(s, "time.t_end = {:?}", self.t_end);
        let _ = writeln!(s, "init.kind = {}", self.init.kind.name());
        let _ = writeln!(s, "init.amplitude = {:?}", self.init.amplitude);
        let _ = writeln!(s, "init.seed = {}", self.init.seed);
        let _ = writeln!(s, "init.mode1 = {}", self.init.mode.0);
        let _ = writeln!(s, "init.mode2 = {}", self.init.mode.1);
        let _ = writeln!(s, "toggles.nonlinear = {}", self.nonlinear);
        let _ = writeln!(s, "toggles.evolve_a = {}", self.evolve_a);
        let _ = writeln!(s, "output.cadence = {}", self.cadence);
        let _ = writeln!(s, "output.dir = {}", self.out_dir.display());
        let _ = writeln!(s, "output.snapshots = {}", self.snapshots);
        s
    }

    /// Number of steps to reach `t_end`; the last one may be shorter than `dt`.
    pub fn step_count(&self) -> usize {
        let n = self.t_end / self.dt;
        let r = n.round();
        if (n - r).abs() <= 1e-9 * n.max(1.0) {
            r as usize
        } else {
            n.ceil() as usize
        }
    }
}
