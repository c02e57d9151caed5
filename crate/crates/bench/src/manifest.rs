//! Benchmark suite descriptions.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use subsel_core::sampler::{generate_front, FrontKind, FrontSpec};
use subsel_core::selectors::reference_vectors::standard_k;
use subsel_core::{ideal_nadir, Method, PointSet, SelectParams, Seed};

use crate::error::{BenchError, Result};
use crate::io::read_points;

pub const DEFAULT_TIME_LIMIT_SECS: f64 = 3600.0;
/// Runs per candidate set for methods that depend on the seed.
pub const RANDOMIZED_REPETITIONS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub suite: String,
    pub datasets: Vec<Dataset>,
    pub selectors: Vec<SelectorConfig>,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    #[serde(default = "default_time_limit")]
    pub time_limit_secs: f64,
}

fn default_time_limit() -> f64 {
    DEFAULT_TIME_LIMIT_SECS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub id: String,
    pub source: DatasetSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSource {
    /// A sampled front; it serves as its own IGD reference set and its
    /// true nadir is all ones.
    Generate {
        kind: String,
        m: usize,
        n: usize,
        seed: u64,
    },
    /// An external archive with its own reference data.
    File {
        path: PathBuf,
        /// Reference set for IGD, IGD+ and epsilon; indicators needing it
        /// are missing without one.
        #[serde(default)]
        reference: Option<PathBuf>,
        /// Nadir of the true front; defaults to the nadir of the reference
        /// set, or of the archive when there is none.
        #[serde(default)]
        true_nadir: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorConfig {
    pub method: String,
    /// Subset size; defaults to the standard size for the objective count.
    #[serde(default)]
    pub k: Option<usize>,
    /// One entry per repetition.
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub params: ParamOverrides,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamOverrides {
    #[serde(default)]
    pub reference_factor: Option<f64>,
    #[serde(default)]
    pub directions: Option<usize>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub translate: Option<bool>,
}

impl ParamOverrides {
    pub fn to_params(&self) -> SelectParams {
        let mut p = SelectParams::default();
        if let Some(f) = self.reference_factor {
            p.reference_factor = f;
        }
        if let Some(d) = self.directions {
            p.directions = d;
        }
        if let Some(i) = self.max_iter {
            p.max_iter = i;
        }
        if let Some(t) = self.translate {
            p.translate = t;
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationConfig {
    /// Hypervolume reference point = factor x true-front nadir.
    pub reference_factor: f64,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self {
            reference_factor: subsel_core::point::REFERENCE_FACTOR,
        }
    }
}

impl SelectorConfig {
    pub fn method(&self) -> Result<Method> {
        Ok(self.method.parse()?)
    }

    pub fn k_for(&self, m: usize) -> Result<usize> {
        self.k.or_else(|| standard_k(m)).ok_or_else(|| {
            BenchError::Invalid(format!(
                "{}: no standard subset size for {m} objectives; set k",
                self.method
            ))
        })
    }
}

/// Where IGD, IGD+ and epsilon references come from.
pub enum ReferenceSet {
    /// The candidate set itself (sampled fronts).
    Candidates,
    External(PointSet),
    Unavailable,
}

/// A dataset in memory with everything needed for evaluation.
pub struct LoadedDataset {
    pub points: PointSet,
    pub reference: ReferenceSet,
    pub hv_reference: Vec<f64>,
}

impl LoadedDataset {
    pub fn reference_set(&self) -> Option<&PointSet> {
        match &self.reference {
            ReferenceSet::Candidates => Some(&self.points),
            ReferenceSet::External(r) => Some(r),
            ReferenceSet::Unavailable => None,
        }
    }
}

impl Dataset {
    pub fn dim(&self, base: &Path) -> Result<usize> {
        match &self.source {
            DatasetSource::Generate { m, .. } => Ok(*m),
            DatasetSource::File { path, .. } => Ok(read_points(&base.join(path))?.dim()),
        }
    }

    pub fn front_spec(&self) -> Result<Option<FrontSpec>> {
        match &self.source {
            DatasetSource::Generate { kind, m, n, seed } => Ok(Some(FrontSpec {
                kind: kind.parse()?,
                m: *m,
                n: *n,
                seed: Seed(*seed),
            })),
            DatasetSource::File { .. } => Ok(None),
        }
    }

    /// Generates or reads the points; relative paths resolve against `base`.
    pub fn load(&self, base: &Path, eval: &EvaluationConfig) -> Result<LoadedDataset> {
        match &self.source {
            DatasetSource::Generate { .. } => {
                let spec = self.front_spec()?.expect("generated source");
                let points = generate_front(&spec)?.with_label(self.id.clone());
                let hv_reference = subsel_core::reference_point(&spec.kind.true_nadir(spec.m), eval.reference_factor)?;
                Ok(LoadedDataset {
                    points,
                    reference: ReferenceSet::Candidates,
                    hv_reference,
                })
            }
            DatasetSource::File {
                path,
                reference,
                true_nadir,
            } => {
                let points = read_points(&base.join(path))?.with_label(self.id.clone());
                let reference = reference.as_ref().map(|r| read_points(&base.join(r))).transpose()?;
                if let Some(r) = &reference {
                    if r.dim() != points.dim() {
                        return Err(subsel_core::Error::DimensionMismatch {
                            expected: points.dim(),
                            found: r.dim(),
                        }
                        .into());
                    }
                }
                let nadir = match true_nadir {
                    Some(n) => n.clone(),
                    None => ideal_nadir(reference.as_ref().unwrap_or(&points))?.1,
                };
                if nadir.len() != points.dim() {
                    return Err(BenchError::Invalid(format!(
                        "dataset '{}': true_nadir has {} entries for {} objectives",
                        self.id,
                        nadir.len(),
                        points.dim()
                    )));
                }
                let hv_reference = subsel_core::reference_point(&nadir, eval.reference_factor)?;
                Ok(LoadedDataset {
                    points,
                    reference: reference.map_or(ReferenceSet::Unavailable, ReferenceSet::External),
                    hv_reference,
                })
            }
        }
    }
}

impl SuiteManifest {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| BenchError::Json {
            path: path.to_path_buf(),
            source: e,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifests always serialize")
    }

    /// Checks the invariants that do not need data: unique dataset ids,
    /// known methods and front kinds, the repetition protocol (ten runs for
    /// randomized methods, one otherwise), and that referenced files exist.
    pub fn validate(&self, base: &Path) -> Result<()> {
        let mut ids = HashSet::new();
        for d in &self.datasets {
            if !ids.insert(d.id.as_str()) {
                return Err(BenchError::Invalid(format!("duplicate dataset id '{}'", d.id)));
            }
            match &d.source {
                DatasetSource::Generate { .. } => {
                    d.front_spec()?;
                }
                DatasetSource::File { path, reference, .. } => {
                    for p in std::iter::once(path).chain(reference) {
                        let full = base.join(p);
                        if !full.is_file() {
                            return Err(BenchError::Invalid(format!(
                                "dataset '{}': file {} does not exist",
                                d.id,
                                full.display()
                            )));
                        }
                    }
                }
            }
        }
        for s in &self.selectors {
            let method = s.method()?;
            let want = if method.is_randomized() { RANDOMIZED_REPETITIONS } else { 1 };
            if s.seeds.len() != want {
                return Err(BenchError::Invalid(format!(
                    "{}: expected {want} seed(s), found {}",
                    method,
                    s.seeds.len()
                )));
            }
        }
        if !(self.time_limit_secs >= 0.0) {
            return Err(BenchError::Invalid("time limit must be nonnegative".into()));
        }
        Ok(())
    }

    /// Built-in suites:
    ///
    /// * `paper`: the 72 sampled sets (six fronts, 10K/100K/1M points,
    ///   3/5/8/10 objectives);
    /// * `small`: the 24 sets with 5 and 10 objectives and 100K/1M points;
    /// * `desk`: the six fronts with 3 objectives and 10K points.
    ///
    /// Every suite runs all ten methods with the standard subset sizes.
    pub fn preset(name: &str, seed: u64) -> Result<Self> {
        let (ms, ns): (&[usize], &[usize]) = match name {
            "paper" => (&[3, 5, 8, 10], &[10_000, 100_000, 1_000_000]),
            "small" => (&[5, 10], &[100_000, 1_000_000]),
            "desk" => (&[3], &[10_000]),
            _ => {
                return Err(BenchError::Invalid(format!(
                    "unknown preset '{name}' (paper, small or desk)"
                )))
            }
        };
        let root = Seed(seed);
        let mut datasets = Vec::new();
        for &n in ns {
            for &m in ms {
                for kind in FrontKind::ALL {
                    let id = format!("{}-m{m}-n{n}", kind.name());
                    datasets.push(Dataset {
                        source: DatasetSource::Generate {
                            kind: kind.name().to_string(),
                            m,
                            n,
                            seed: root.derive(&id).0,
                        },
                        id,
                    });
                }
            }
        }
        Ok(Self {
            suite: name.to_string(),
            datasets,
            selectors: default_selectors(seed),
            evaluation: EvaluationConfig::default(),
            time_limit_secs: DEFAULT_TIME_LIMIT_SECS,
        })
    }
}

/// All ten methods with default parameters: one run for deterministic
/// methods and ten seeded runs for randomized ones.
pub fn default_selectors(seed: u64) -> Vec<SelectorConfig> {
    Method::ALL
        .into_iter()
        .map(|method| {
            let reps = if method.is_randomized() { RANDOMIZED_REPETITIONS } else { 1 };
            SelectorConfig {
                method: method.id().to_string(),
                k: None,
                seeds: (0..reps as u64).map(|r| Seed(seed).derive_index("run", r).0).collect(),
                params: ParamOverrides::default(),
            }
        })
        .collect()
}
