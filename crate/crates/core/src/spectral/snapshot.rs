//! Binary snapshot format.
//!
//! ```text
//! magic   "MHDSNAP1"                         8 bytes
//! n1, n2  u64 little-endian                  16 bytes
//! length1, length2, time  f64 little-endian  24 bytes
//! per field:
//!   tag   8 ASCII bytes, space padded (e.g. "u.x     ")
//!   coefficients, row-major (i1 * n2 + i2), each as re, im f64 LE
//! ```
//!
//! Coefficients use the crate normalization: the forward transform carries
//! the factor `1/(n1·n2)`, so the `(0,0)` entry is the field mean and
//! `mean |f|² = Σ |c|²`.

use std::io::{self, Read, Write};

use num_complex::Complex64;

use super::{Grid, SpectralError, SpectralField};

pub const MAGIC: &[u8; 8] = b"MHDSNAP1";
pub const TAG_LEN: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("not a snapshot (bad magic)")]
    BadMagic,
    #[error("invalid tag {0:?}")]
    BadTag(String),
    #[error("missing field {0}")]
    MissingField(String),
    #[error(transparent)]
    Grid(#[from] SpectralError),
}

/// Decoded snapshot: grid, time and tagged fields in file order.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub grid: Grid,
    pub time: f64,
    pub fields: Vec<(String, SpectralField)>,
}

impl Snapshot {
    pub fn field(&self, tag: &str) -> Result<&SpectralField, SnapshotError> {
        self.fields
            .iter()
            .find(|(t, _)| t == tag)
            .map(|(_, f)| f)
            .ok_or_else(|| SnapshotError::MissingField(tag.to_string()))
    }
}

fn encode_tag(tag: &str) -> Result<[u8; TAG_LEN], SnapshotError> {
    if tag.len() > TAG_LEN || !tag.is_ascii() || tag.is_empty() {
        return Err(SnapshotError::BadTag(tag.to_string()));
    }
    let mut out = [b' '; TAG_LEN];
    out[..tag.len()].copy_from_slice(tag.as_bytes());
    Ok(out)
}

pub fn write_snapshot<W: Write>(
    mut w: W,
    grid: &Grid,
    time: f64,
    fields: &[(&str, &SpectralField)],
) -> Result<(), SnapshotError> {
    w.write_all(MAGIC)?;
    w.write_all(&(grid.n1() as u64).to_le_bytes())?;
    w.write_all(&(grid.n2() as u64).to_le_bytes())?;
    for v in [grid.length1(), grid.length2(), time] {
        w.write_all(&v.to_le_bytes())?;
    }
    for (tag, f) in fields {
        grid.check_same(f.grid())?;
        w.write_all(&encode_tag(tag)?)?;
        let mut buf = Vec::with_capacity(16 * f.coeffs().len());
        for c in f.coeffs() {
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    w.flush()?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> io::Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<Snapshot, SnapshotError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let n1 = read_u64(&mut r)? as usize;
    let n2 = read_u64(&mut r)? as usize;
    let l1 = read_f64(&mut r)?;
    let l2 = read_f64(&mut r)?;
    let time = read_f64(&mut r)?;
    let grid = Grid::new(n1, n2, l1, l2)?;
    let mut fields = Vec::new();
    loop {
        let mut tag = [0u8; TAG_LEN];
        match r.read(&mut tag[..1])? {
            0 => break,
            _ => r.read_exact(&mut tag[1..])?,
        }
        let tag = std::str::from_utf8(&tag)
            .map_err(|_| SnapshotError::BadTag(format!("{tag:?}")))?
            .trim_end()
            .to_string();
        let mut raw = vec![0u8; 16 * grid.len()];
        r.read_exact(&mut raw)?;
        let coeffs = raw
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect();
        fields.push((tag, SpectralField::from_coeffs(grid, coeffs)?));
    }
    Ok(Snapshot { grid, time, fields })
}
