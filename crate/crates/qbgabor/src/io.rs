//! File formats: little-endian binary signals ("QBG1") and coefficient
//! grids ("QBC1" plus a JSON lattice sidecar), CSV variants, weight and
//! point-set files, and the JSON norm-spec descriptor.
//!
//! All writes go through a temp-file-and-rename so readers never observe a
//! partial file.

use std::fs;
use std::io::{Cursor, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabor::{CoefficientGrid, LatticeParams};
use crate::grid::{GridGroup, Signal};
use crate::norms::QuasiNormSpec;

const SIGNAL_MAGIC: &[u8; 4] = b"QBG1";
const GRID_MAGIC: &[u8; 4] = b"QBC1";

/// Write bytes atomically: temp file in the same directory, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = tmp_path(path);
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Serialize a signal to the binary layout: magic, u32 length, then
/// `(re, im)` f64 pairs, all little-endian.
pub fn signal_to_bytes(signal: &Signal) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 16 * signal.len());
    out.extend_from_slice(SIGNAL_MAGIC);
    out.write_u32::<LittleEndian>(signal.len() as u32).unwrap();
    for v in signal.values() {
        out.write_f64::<LittleEndian>(v.re).unwrap();
        out.write_f64::<LittleEndian>(v.im).unwrap();
    }
    out
}

pub fn signal_from_bytes(bytes: &[u8], origin: &Path) -> Result<Signal> {
    let mut cur = Cursor::new(bytes);
    let mut magic = [0u8; 4];
    cur.read_exact(&mut magic)
        .map_err(|_| format_err(origin, "file too short for magic"))?;
    if &magic != SIGNAL_MAGIC {
        return Err(format_err(origin, "bad magic, expected QBG1"));
    }
    let len = cur
        .read_u32::<LittleEndian>()
        .map_err(|_| format_err(origin, "missing length"))? as usize;
    let mut values = Vec::with_capacity(len);
    for _ in 0..len {
        let re = cur
            .read_f64::<LittleEndian>()
            .map_err(|_| format_err(origin, "truncated sample data"))?;
        let im = cur
            .read_f64::<LittleEndian>()
            .map_err(|_| format_err(origin, "truncated sample data"))?;
        values.push(Complex64::new(re, im));
    }
    if cur.position() as usize != bytes.len() {
        return Err(format_err(origin, "trailing bytes after sample data"));
    }
    let group = GridGroup::new(len)?;
    Signal::new(group, values)
}

/// Write a signal; `.csv` paths get the text form `index,re,im`.
pub fn write_signal(path: &Path, signal: &Signal) -> Result<()> {
    if is_csv(path) {
        let mut text = String::new();
        for (i, v) in signal.values().iter().enumerate() {
            text.push_str(&format!("{i},{:?},{:?}\n", v.re, v.im));
        }
        atomic_write(path, text.as_bytes())
    } else {
        atomic_write(path, &signal_to_bytes(signal))
    }
}

/// Read a signal in either format, sniffing the binary magic.
pub fn read_signal(path: &Path) -> Result<Signal> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(SIGNAL_MAGIC) {
        return signal_from_bytes(&bytes, path);
    }
    let text = String::from_utf8(bytes).map_err(|_| format_err(path, "not UTF-8"))?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(format_err(
                path,
                &format!("line {}: expected index,re,im", lineno + 1),
            ));
        }
        let index: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| format_err(path, &format!("line {}: bad index", lineno + 1)))?;
        let re: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| format_err(path, &format!("line {}: bad re", lineno + 1)))?;
        let im: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| format_err(path, &format!("line {}: bad im", lineno + 1)))?;
        entries.push((index, Complex64::new(re, im)));
    }
    let len = entries.len();
    let group = GridGroup::new(len)?;
    let mut values = vec![Complex64::new(0.0, 0.0); len];
    let mut seen = vec![false; len];
    for (index, v) in entries {
        if index >= len || seen[index] {
            return Err(format_err(path, &format!("bad or repeated index {index}")));
        }
        seen[index] = true;
        values[index] = v;
    }
    Signal::new(group, values)
}

/// Serialize a coefficient grid: magic, u32 N, u32 M, then row-major
/// complex samples (time index outer, frequency inner).
pub fn grid_to_bytes(grid: &CoefficientGrid) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + 16 * grid.values().len());
    out.extend_from_slice(GRID_MAGIC);
    out.write_u32::<LittleEndian>(grid.time_len() as u32)
        .unwrap();
    out.write_u32::<LittleEndian>(grid.freq_len() as u32)
        .unwrap();
    for v in grid.values() {
        out.write_f64::<LittleEndian>(v.re).unwrap();
        out.write_f64::<LittleEndian>(v.im).unwrap();
    }
    out
}

pub fn grid_from_bytes(
    bytes: &[u8],
    lattice: LatticeParams,
    origin: &Path,
) -> Result<CoefficientGrid> {
    let mut cur = Cursor::new(bytes);
    let mut magic = [0u8; 4];
    cur.read_exact(&mut magic)
        .map_err(|_| format_err(origin, "file too short for magic"))?;
    if &magic != GRID_MAGIC {
        return Err(format_err(origin, "bad magic, expected QBC1"));
    }
    let n = cur
        .read_u32::<LittleEndian>()
        .map_err(|_| format_err(origin, "missing row count"))? as usize;
    let m = cur
        .read_u32::<LittleEndian>()
        .map_err(|_| format_err(origin, "missing column count"))? as usize;
    if n != lattice.time_shifts() || m != lattice.m {
        return Err(format_err(
            origin,
            &format!(
                "grid is {n} x {m} but the lattice implies {} x {}",
                lattice.time_shifts(),
                lattice.m
            ),
        ));
    }
    let mut values = Vec::with_capacity(n * m);
    for _ in 0..n * m {
        let re = cur
            .read_f64::<LittleEndian>()
            .map_err(|_| format_err(origin, "truncated coefficient data"))?;
        let im = cur
            .read_f64::<LittleEndian>()
            .map_err(|_| format_err(origin, "truncated coefficient data"))?;
        values.push(Complex64::new(re, im));
    }
    if cur.position() as usize != bytes.len() {
        return Err(format_err(origin, "trailing bytes after coefficients"));
    }
    CoefficientGrid::new(lattice, values)
}

/// Sidecar path of a grid file: extension replaced with `json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Write a grid plus its lattice sidecar.
pub fn write_grid(path: &Path, grid: &CoefficientGrid) -> Result<()> {
    atomic_write(path, &grid_to_bytes(grid))?;
    let sidecar = serde_json::to_vec_pretty(&grid.lattice())?;
    atomic_write(&sidecar_path(path), &sidecar)?;
    Ok(())
}

/// Read a grid; the lattice comes from the sidecar unless given explicitly.
pub fn read_grid(path: &Path, lattice: Option<LatticeParams>) -> Result<CoefficientGrid> {
    let lattice = match lattice {
        Some(l) => l,
        None => {
            let sidecar = sidecar_path(path);
            let bytes = fs::read(&sidecar).map_err(|_| {
                format_err(
                    &sidecar,
                    "missing lattice sidecar; pass the lattice explicitly",
                )
            })?;
            serde_json::from_slice(&bytes)?
        }
    };
    let bytes = fs::read(path)?;
    grid_from_bytes(&bytes, lattice, path)
}

/// True when the path holds a coefficient grid (by magic).
pub fn is_grid_file(path: &Path) -> Result<bool> {
    let mut magic = [0u8; 4];
    let mut file = fs::File::open(path)?;
    match file.read_exact(&mut magic) {
        Ok(()) => Ok(&magic == GRID_MAGIC),
        Err(_) => Ok(false),
    }
}

/// Weight file: CSV rows `index,value`.
pub fn read_weight_csv(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(format_err(
                path,
                &format!("line {}: expected index,value", lineno + 1),
            ));
        }
        let index: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| format_err(path, &format!("line {}: bad index", lineno + 1)))?;
        let value: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| format_err(path, &format!("line {}: bad value", lineno + 1)))?;
        entries.push((index, value));
    }
    let len = entries.len();
    let mut values = vec![f64::NAN; len];
    for (index, v) in entries {
        if index >= len || !values[index].is_nan() {
            return Err(format_err(path, &format!("bad or repeated index {index}")));
        }
        values[index] = v;
    }
    Ok(values)
}

pub fn write_weight_csv(path: &Path, values: &[f64]) -> Result<()> {
    let mut text = String::new();
    for (i, v) in values.iter().enumerate() {
        text.push_str(&format!("{i},{v:?}\n"));
    }
    atomic_write(path, text.as_bytes())
}

/// Point set file: one index per line.
pub fn read_point_set(path: &Path, group: GridGroup) -> Result<crate::coorbit::PointSet> {
    let text = fs::read_to_string(path)?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let p: usize = line
            .parse()
            .map_err(|_| format_err(path, &format!("line {}: bad index", lineno + 1)))?;
        points.push(p);
    }
    crate::coorbit::PointSet::new(group, points)
}

/// JSON descriptor of a quasi-norm, as consumed by the command surface.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NormSpecFile {
    pub kind: String,
    pub p: ExponentField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<ExponentField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default = "default_weight")]
    pub weight: String,
}

fn default_weight() -> String {
    "one".to_string()
}

/// An exponent that is either a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentField(pub f64);

impl Serialize for ExponentField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExponentField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(ExponentField(x)),
            Raw::Text(t) if t == "inf" => Ok(ExponentField(f64::INFINITY)),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {t:?}"
            ))),
        }
    }
}

impl NormSpecFile {
    pub fn from_path(path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        Ok(serde_json::from_slice(&bytes)?)
    }

    /// Resolve the descriptor against a concrete array shape. Weight `"one"`
    /// means the constant weight; any other value is a CSV path relative to
    /// `base_dir`.
    pub fn resolve(
        &self,
        len: usize,
        dims: Option<(usize, usize)>,
        base_dir: &Path,
    ) -> Result<QuasiNormSpec> {
        let weight = if self.weight == "one" {
            vec![1.0; len]
        } else {
            let path = base_dir.join(&self.weight);
            let values = read_weight_csv(&path)?;
            if values.len() != len {
                return Err(Error::ShapeMismatch {
                    expected: format!("weight of length {len}"),
                    got: values.len(),
                });
            }
            values
        };
        match self.kind.as_str() {
            "lp" => QuasiNormSpec::lp_weighted(self.p.0, weight),
            "mixed" => {
                let (time_len, freq_len) = dims.ok_or_else(|| {
                    Error::bad_params("mixed norm requires a two-dimensional input".to_string())
                })?;
                let q = self
                    .q
                    .ok_or_else(|| Error::bad_params("mixed norm requires q".to_string()))?;
                QuasiNormSpec::mixed_weighted(self.p.0, q.0, weight, time_len, freq_len)
            }
            "lorentz" => {
                let q = self
                    .q
                    .ok_or_else(|| Error::bad_params("lorentz norm requires q".to_string()))?;
                match self.r {
                    None => QuasiNormSpec::lorentz_weighted(self.p.0, q.0, weight),
                    Some(r) => QuasiNormSpec::lorentz_maximal(self.p.0, q.0, r, weight),
                }
            }
            other => Err(Error::bad_params(format!(
                "unknown norm kind {other:?}, expected lp, mixed, or lorentz"
            ))),
        }
    }
}

fn format_err(path: &Path, reason: &str) -> Error {
    Error::Format {
        path: path.display().to_string(),
        reason: reason.to_string(),
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .map(|e| e.eq_ignore_ascii_case("csv"))
        .unwrap_or(false)
}
