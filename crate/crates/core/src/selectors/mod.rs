//! The ten subset-selection methods behind one entry point, [`select`].
//!
//! | id        | objective                           | module          |
//! |-----------|-------------------------------------|-----------------|
//! | GHSS      | hypervolume, exact contributions    | [`greedy`]      |
//! | GAHSS     | hypervolume, ray approximation      | [`greedy`]      |
//! | GIGDSS    | IGD against the candidate set       | [`greedy`]      |
//! | GIGD+SS   | IGD+ against the candidate set      | [`greedy`]      |
//! | DSS       | farthest-point traversal            | [`distance`]    |
//! | IDSS      | iterated DSS repair                 | [`distance`]    |
//! | CSS-MEA   | k-means representatives             | [`cluster`]     |
//! | CSS-MED   | k-medoids (Voronoi iteration)       | [`cluster`]     |
//! | RVSS-PD   | nearest to reference vectors (perp) | [`rvss`]        |
//! | RVSS-AD   | nearest to reference vectors (angle)| [`rvss`]        |

pub mod cluster;
pub mod distance;
pub mod greedy;
pub mod reference_vectors;
pub mod rvss;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::hypervolume::{generate_directions, DEFAULT_DIRECTIONS};
use crate::point::{ideal_nadir, reference_point, PointSet, Seed, REFERENCE_FACTOR};

pub use greedy::{lazy_greedy, GainOracle};
pub use reference_vectors::{das_dennis, standard_reference_vectors, two_layer, ReferenceVectorSet};
pub use rvss::RvssDistance;

/// Default iteration cap for IDSS, CSS-MEA and CSS-MED.
pub const DEFAULT_MAX_ITER: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Ghss,
    Gahss,
    Gigdss,
    GigdPlusss,
    Dss,
    Idss,
    CssMea,
    CssMed,
    RvssPd,
    RvssAd,
}

impl Method {
    pub const ALL: [Method; 10] = [
        Method::Ghss,
        Method::Gahss,
        Method::Gigdss,
        Method::GigdPlusss,
        Method::Dss,
        Method::Idss,
        Method::CssMea,
        Method::CssMed,
        Method::RvssPd,
        Method::RvssAd,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Method::Ghss => "GHSS",
            Method::Gahss => "GAHSS",
            Method::Gigdss => "GIGDSS",
            Method::GigdPlusss => "GIGD+SS",
            Method::Dss => "DSS",
            Method::Idss => "IDSS",
            Method::CssMea => "CSS-MEA",
            Method::CssMed => "CSS-MED",
            Method::RvssPd => "RVSS-PD",
            Method::RvssAd => "RVSS-AD",
        }
    }

    /// Methods whose output depends on the seed.
    pub fn is_randomized(self) -> bool {
        matches!(self, Method::Idss | Method::CssMea | Method::CssMed)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_uppercase().replace('_', "-");
        Method::ALL
            .into_iter()
            .find(|m| m.id() == key || m.id().replace('+', "P") == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method '{s}'")))
    }
}

/// Cooperative cancellation: an optional deadline plus a shared flag.
///
/// Selectors poll [`CancelToken::check`] between greedy steps and
/// iterations, and periodically inside long initial passes.
#[derive(Debug, Clone, Default)]
pub struct CancelToken {
    deadline: Option<Instant>,
    flag: Arc<AtomicBool>,
}

impl CancelToken {
    /// A token that never fires on its own.
    pub fn never() -> Self {
        Self::default()
    }

    pub fn with_limit(limit: Duration) -> Self {
        Self {
            deadline: Instant::now().checked_add(limit),
            flag: Arc::default(),
        }
    }

    pub fn cancel(&self) {
        self.flag.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.flag.load(Ordering::Relaxed) || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn check(&self) -> Result<()> {
        if self.is_cancelled() {
            Err(Error::Cancelled)
        } else {
            Ok(())
        }
    }
}

/// Method parameters. Unset optional values take the benchmark defaults.
#[derive(Debug, Clone)]
pub struct SelectParams {
    /// Hypervolume reference point for GHSS/GAHSS; defaults to
    /// `reference_factor` times the candidate-set nadir.
    pub reference_point: Option<Vec<f64>>,
    pub reference_factor: f64,
    /// Number of direction vectors for GAHSS.
    pub directions: usize,
    /// Iteration cap for IDSS, CSS-MEA and CSS-MED.
    pub max_iter: usize,
    /// Reference vectors for RVSS; defaults to the standard lattice for `m`.
    pub reference_vectors: Option<ReferenceVectorSet>,
    /// Translate candidates by their ideal point before RVSS distances.
    pub translate: bool,
}

impl Default for SelectParams {
    fn default() -> Self {
        Self {
            reference_point: None,
            reference_factor: REFERENCE_FACTOR,
            directions: DEFAULT_DIRECTIONS,
            max_iter: DEFAULT_MAX_ITER,
            reference_vectors: None,
            translate: true,
        }
    }
}

/// Outcome of one selection run.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// Indices into the candidate set, in selection order. Empty when the
    /// run timed out.
    pub indices: Vec<usize>,
    pub method: Method,
    pub params: BTreeMap<String, String>,
    pub seed: Option<Seed>,
    pub runtime_seconds: f64,
    pub timed_out: bool,
}

fn hv_reference(a: &PointSet, params: &SelectParams) -> Result<Vec<f64>> {
    match &params.reference_point {
        Some(r) if r.len() != a.dim() => Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: r.len(),
        }),
        Some(r) => Ok(r.clone()),
        None => reference_point(&ideal_nadir(a)?.1, params.reference_factor),
    }
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

/// Runs `method` on candidate set `a` to pick `k` points.
///
/// A cancelled run (deadline or explicit cancel) is reported with
/// `timed_out = true` and no indices; invalid input is an error.
pub fn select(
    a: &PointSet,
    k: usize,
    method: Method,
    params: &SelectParams,
    seed: Option<Seed>,
    cancel: &CancelToken,
) -> Result<SelectionResult> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    if k == 0 || k > a.len() {
        return Err(Error::SubsetTooLarge {
            k,
            available: a.len(),
        });
    }
    let run_seed = seed.unwrap_or(Seed(0));
    let mut record = BTreeMap::new();
    let start = Instant::now();
    let outcome = cancel.check().and_then(|()| match method {
        Method::Ghss => {
            let r = hv_reference(a, params)?;
            record.insert("reference_point".into(), fmt_vec(&r));
            greedy::select_ghss(a, k, &r, cancel)
        }
        Method::Gahss => {
            let r = hv_reference(a, params)?;
            let dirs = generate_directions(a.dim(), params.directions, run_seed.derive("gahss-directions"))?;
            record.insert("reference_point".into(), fmt_vec(&r));
            record.insert("directions".into(), params.directions.to_string());
            record.insert("direction_distribution".into(), "uniform-positive-sphere".into());
            greedy::select_gahss(a, k, &r, &dirs, cancel)
        }
        Method::Gigdss => greedy::select_gigdss(a, k, cancel),
        Method::GigdPlusss => greedy::select_gigdpss(a, k, cancel),
        Method::Dss => {
            record.insert("init".into(), "max-first-objective".into());
            distance::select_dss(a, k, cancel)
        }
        Method::Idss => {
            record.insert("max_iter".into(), params.max_iter.to_string());
            distance::select_idss(a, k, params.max_iter, run_seed, cancel)
        }
        Method::CssMea => {
            record.insert("max_iter".into(), params.max_iter.to_string());
            cluster::select_css_means(a, k, params.max_iter, run_seed, cancel)
        }
        Method::CssMed => {
            record.insert("max_iter".into(), params.max_iter.to_string());
            record.insert("algorithm".into(), "voronoi-iteration".into());
            cluster::select_css_medoids(a, k, params.max_iter, run_seed, cancel)
        }
        Method::RvssPd | Method::RvssAd => {
            let v = match &params.reference_vectors {
                Some(v) => v.clone(),
                None => reference_vectors::for_subset_size(a.dim(), k)?,
            };
            record.insert("translate".into(), params.translate.to_string());
            record.insert("reference_vectors".into(), v.describe());
            let d = if method == Method::RvssPd {
                RvssDistance::Perpendicular
            } else {
                RvssDistance::Angle
            };
            rvss::select_rvss(a, &v, d, params.translate, cancel)
        }
    });
    let runtime_seconds = start.elapsed().as_secs_f64();
    let seed = method.is_randomized().then_some(run_seed).or(seed);
    match outcome {
        Ok(indices) => Ok(SelectionResult {
            indices,
            method,
            params: record,
            seed,
            runtime_seconds,
            timed_out: false,
        }),
        Err(Error::Cancelled) => Ok(SelectionResult {
            indices: Vec::new(),
            method,
            params: record,
            seed,
            runtime_seconds,
            timed_out: true,
        }),
        Err(e) => Err(e),
    }
}
