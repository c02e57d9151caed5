//! Point-set files.
//!
//! The text format is CSV with a `m=<int>` header line and one point per
//! row, written with the shortest decimal that round-trips. The binary
//! format is the magic `PSS1`, then `m` and `n` as little-endian `u64`,
//! then `n * m` little-endian `f64` values in row-major order.
//!
//! The reader also accepts headerless files whose fields are separated by
//! commas, semicolons or whitespace, skipping blank lines and `#` comments,
//! so that archives written by other tools can be ingested directly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use subsel_core::PointSet;

use crate::error::{BenchError, Result};

pub const MAGIC: &[u8; 4] = b"PSS1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Bin,
}

impl FromStr for Format {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "bin" => Ok(Format::Bin),
            _ => Err(BenchError::Invalid(format!("unknown format '{s}' (csv or bin)"))),
        }
    }
}

pub fn write_csv<W: Write>(mut w: W, s: &PointSet) -> std::io::Result<()> {
    writeln!(w, "m={}", s.dim())?;
    let mut line = String::new();
    for p in s.iter() {
        line.clear();
        for (j, v) in p.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            // Display for f64 is the shortest string that parses back exactly.
            line.push_str(&v.to_string());
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    w.flush()
}

pub fn write_bin<W: Write>(mut w: W, s: &PointSet) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(s.dim() as u64).to_le_bytes())?;
    w.write_all(&(s.len() as u64).to_le_bytes())?;
    for v in s.as_flat() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

pub fn write_points(path: &Path, s: &PointSet, format: Format) -> Result<()> {
    let file = File::create(path).map_err(|e| BenchError::io(path, e))?;
    let w = BufWriter::new(file);
    match format {
        Format::Csv => write_csv(w, s),
        Format::Bin => write_bin(w, s),
    }
    .map_err(|e| BenchError::io(path, e))
}

/// Reads a point file in either format, detected from the first bytes.
pub fn read_points(path: &Path) -> Result<PointSet> {
    let file = File::open(path).map_err(|e| BenchError::io(path, e))?;
    let mut r = BufReader::new(file);
    let head = r.fill_buf().map_err(|e| BenchError::io(path, e))?;
    if head.starts_with(MAGIC) {
        read_bin(r, path)
    } else {
        parse_text(r, path)
    }
}

fn read_bin<R: Read>(mut r: R, path: &Path) -> Result<PointSet> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| BenchError::io(path, e))?;
    let bad = |msg: &str| BenchError::Parse {
        path: path.to_path_buf(),
        line: 0,
        msg: msg.to_string(),
    };
    if bytes.len() < 20 || &bytes[..4] != MAGIC {
        return Err(bad("truncated binary header"));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let (m, n) = (word(4), word(12));
    let expected = m
        .checked_mul(n)
        .and_then(|c| c.checked_mul(8))
        .and_then(|c| c.checked_add(20))
        .ok_or_else(|| bad("header sizes overflow"))?;
    if bytes.len() as u64 != expected {
        return Err(bad(&format!(
            "payload holds {} bytes, header announces {m} x {n} values",
            bytes.len() - 20
        )));
    }
    let data = bytes[20..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(PointSet::new(m as usize, data)?)
}

/// Parses the text format from any reader; `path` is used in messages.
pub fn parse_text<R: BufRead>(r: R, path: &Path) -> Result<PointSet> {
    let mut m: Option<usize> = None;
    let mut data = Vec::new();
    let mut rows = 0usize;
    for (no, line) in r.lines().enumerate() {
        let line = line.map_err(|e| BenchError::io(path, e))?;
        let err = |msg: String| BenchError::Parse {
            path: path.to_path_buf(),
            line: no + 1,
            msg,
        };
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(v) = t.strip_prefix("m=") {
            if m.is_some() || rows > 0 {
                return Err(err("header must precede all rows".into()));
            }
            let parsed = v.trim().parse().map_err(|_| err(format!("bad header '{t}'")))?;
            m = Some(parsed);
            continue;
        }
        let before = data.len();
        for field in t.split(|c: char| c == ',' || c == ';' || c.is_whitespace()) {
            if field.is_empty() {
                continue;
            }
            let v: f64 = field
                .parse()
                .map_err(|_| err(format!("not a number: '{field}'")))?;
            if !v.is_finite() {
                return Err(err(format!("non-finite value '{field}'")));
            }
            data.push(v);
        }
        let width = data.len() - before;
        match m {
            None => m = Some(width),
            Some(w) if w != width => {
                return Err(err(format!("row has {width} values, expected {w}")));
            }
            _ => {}
        }
        rows += 1;
    }
    let m = m.ok_or_else(|| BenchError::Parse {
        path: path.to_path_buf(),
        line: 0,
        msg: "no header and no rows".into(),
    })?;
    Ok(PointSet::new(m, data)?)
}
