//! Run records, stored one JSON object per line.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Evaluated quantities of a run, in the order of the result tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Hv,
    Igd,
    IgdPlus,
    EpsPlus,
    Uniformity,
    Runtime,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Hv,
        Metric::Igd,
        Metric::IgdPlus,
        Metric::EpsPlus,
        Metric::Uniformity,
        Metric::Runtime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Hv => "hv",
            Metric::Igd => "igd",
            Metric::IgdPlus => "igd_plus",
            Metric::EpsPlus => "eps_plus",
            Metric::Uniformity => "uniformity",
            Metric::Runtime => "runtime_seconds",
        }
    }

    pub fn higher_is_better(self) -> bool {
        matches!(self, Metric::Hv | Metric::Uniformity)
    }
}

/// `Option<f64>` written as a number or the string `"missing"`.
mod missing {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) if x.is_finite() => s.serialize_f64(*x),
            _ => s.serialize_str("missing"),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Some(x)),
            Raw::Text(t) if t == "missing" => Ok(None),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"missing\", got \"{t}\""))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    #[serde(with = "missing")]
    pub hv: Option<f64>,
    #[serde(with = "missing")]
    pub igd: Option<f64>,
    #[serde(with = "missing")]
    pub igd_plus: Option<f64>,
    #[serde(with = "missing")]
    pub eps_plus: Option<f64>,
    #[serde(with = "missing")]
    pub uniformity: Option<f64>,
}

/// One (dataset, method, seed) cell. A timed-out run has every metric
/// missing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub method: String,
    pub seed: Option<u64>,
    pub k: usize,
    #[serde(flatten)]
    pub metrics: Metrics,
    pub runtime_seconds: f64,
    pub timed_out: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
}

impl RunRecord {
    pub fn metric(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Hv => self.metrics.hv,
            Metric::Igd => self.metrics.igd,
            Metric::IgdPlus => self.metrics.igd_plus,
            Metric::EpsPlus => self.metrics.eps_plus,
            Metric::Uniformity => self.metrics.uniformity,
            Metric::Runtime => (!self.timed_out).then_some(self.runtime_seconds),
        }
    }

    /// Identity of the cell for resumption.
    pub fn key(&self) -> (String, String, Option<u64>) {
        (self.dataset.clone(), self.method.clone(), self.seed)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

/// Reads every complete record. A final line without its newline (a write
/// cut short by a crash) is ignored; any other malformed line is an error.
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    Ok(scan(path)?.0)
}

// Records plus the byte length of the well-formed prefix.
fn scan(path: &Path) -> Result<(Vec<RunRecord>, u64)> {
    let file = File::open(path).map_err(|e| BenchError::io(path, e))?;
    let mut r = BufReader::new(file);
    let mut records = Vec::new();
    let mut good = 0u64;
    let mut line = String::new();
    let mut no = 0;
    loop {
        line.clear();
        let read = r.read_line(&mut line).map_err(|e| BenchError::io(path, e))?;
        if read == 0 || !line.ends_with('\n') {
            break;
        }
        no += 1;
        if !line.trim().is_empty() {
            let rec = serde_json::from_str(&line).map_err(|e| BenchError::Parse {
                path: path.to_path_buf(),
                line: no,
                msg: e.to_string(),
            })?;
            records.push(rec);
        }
        good += read as u64;
    }
    Ok((records, good))
}

/// Append-only JSONL writer that flushes after every record.
pub struct RecordWriter {
    path: PathBuf,
    file: File,
}

impl RecordWriter {
    /// Opens `path` for appending and returns the records already in it.
    /// A torn final line is truncated away first.
    pub fn open(path: &Path) -> Result<(Self, Vec<RunRecord>)> {
        let existing = if path.exists() {
            let (records, good) = scan(path)?;
            let f = OpenOptions::new().write(true).open(path).map_err(|e| BenchError::io(path, e))?;
            f.set_len(good).map_err(|e| BenchError::io(path, e))?;
            records
        } else {
            Vec::new()
        };
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| BenchError::io(path, e))?;
        Ok((
            Self {
                path: path.to_path_buf(),
                file,
            },
            existing,
        ))
    }

    pub fn append(&mut self, rec: &RunRecord) -> Result<()> {
        let mut line = rec.to_line();
        line.push('\n');
        self.file
            .write_all(line.as_bytes())
            .and_then(|()| self.file.flush())
            .map_err(|e| BenchError::io(&self.path, e))
    }
}
