//! Lazy greedy maximization and the indicator-based gain oracles.
//!
//! For a monotone submodular objective, a candidate's marginal gain can
//! only shrink as the subset grows, so a gain cached at an earlier step is
//! an upper bound. The engine keeps all candidates in a max-heap keyed by
//! cached gain and re-evaluates only the top entry until the top is fresh.
//! With ties broken by smallest index on both the heap and the naive scan,
//! the lazy and naive procedures pick the same sequence.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::exec;
use crate::hypervolume::{approx_exclusive_hv, exclusive_hv, DirectionVectorSet};
use crate::indicators::{dist, dist_plus};
use crate::point::PointSet;

use super::CancelToken;

/// Candidates evaluated between cancellation checks in the initial pass.
const INITIAL_CHUNK: usize = 1024;

/// Marginal gains of adding candidates to a growing subset.
pub trait GainOracle: Sync {
    /// Number of candidates.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Gain of adding `candidate` to the current subset.
    fn gain(&self, candidate: usize) -> f64;

    /// Adds `candidate` to the current subset.
    fn commit(&mut self, candidate: usize);
}

#[derive(Debug, Clone, Copy)]
struct GreedyGainEntry {
    gain: f64,
    index: usize,
    stamp: usize,
}

impl PartialEq for GreedyGainEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for GreedyGainEntry {}

impl PartialOrd for GreedyGainEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GreedyGainEntry {
    // Larger gain first, then smaller index.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Selects `k` candidates by lazy greedy maximization of `oracle`.
pub fn lazy_greedy<O: GainOracle>(oracle: &mut O, k: usize, cancel: &CancelToken) -> Result<Vec<usize>> {
    let n = oracle.len();
    if k > n {
        return Err(Error::SubsetTooLarge { k, available: n });
    }
    let mut heap = BinaryHeap::with_capacity(n);
    for start in (0..n).step_by(INITIAL_CHUNK) {
        cancel.check()?;
        let len = INITIAL_CHUNK.min(n - start);
        let o: &O = oracle;
        let gains = exec::map_range(len, |i| o.gain(start + i));
        heap.extend(gains.into_iter().enumerate().map(|(i, gain)| GreedyGainEntry {
            gain,
            index: start + i,
            stamp: 0,
        }));
    }

    let mut selected = Vec::with_capacity(k);
    while selected.len() < k {
        let step = selected.len();
        let Some(mut top) = heap.pop() else { break };
        if top.stamp == step {
            oracle.commit(top.index);
            selected.push(top.index);
            cancel.check()?;
        } else {
            top.gain = oracle.gain(top.index);
            top.stamp = step;
            heap.push(top);
        }
    }
    Ok(selected)
}

/// Exact hypervolume gain with respect to a fixed reference point.
pub struct HvGain<'a> {
    candidates: &'a PointSet,
    reference: Vec<f64>,
    selected: Vec<f64>,
}

impl<'a> HvGain<'a> {
    pub fn new(candidates: &'a PointSet, reference: &[f64]) -> Self {
        Self {
            candidates,
            reference: reference.to_vec(),
            selected: Vec::new(),
        }
    }
}

impl GainOracle for HvGain<'_> {
    fn len(&self) -> usize {
        self.candidates.len()
    }

    fn gain(&self, candidate: usize) -> f64 {
        let m = self.candidates.dim();
        exclusive_hv(
            self.candidates.point(candidate),
            self.selected.chunks_exact(m),
            &self.reference,
        )
    }

    fn commit(&mut self, candidate: usize) {
        self.selected.extend_from_slice(self.candidates.point(candidate));
    }
}

/// Approximate hypervolume gain from ray lengths along fixed directions.
pub struct HvApproxGain<'a> {
    candidates: &'a PointSet,
    reference: Vec<f64>,
    directions: &'a DirectionVectorSet,
    selected: Vec<f64>,
}

impl<'a> HvApproxGain<'a> {
    pub fn new(candidates: &'a PointSet, reference: &[f64], directions: &'a DirectionVectorSet) -> Self {
        Self {
            candidates,
            reference: reference.to_vec(),
            directions,
            selected: Vec::new(),
        }
    }
}

impl GainOracle for HvApproxGain<'_> {
    fn len(&self) -> usize {
        self.candidates.len()
    }

    fn gain(&self, candidate: usize) -> f64 {
        let m = self.candidates.dim();
        approx_exclusive_hv(
            self.candidates.point(candidate),
            self.selected.chunks_exact(m),
            &self.reference,
            self.directions,
        )
    }

    fn commit(&mut self, candidate: usize) {
        self.selected.extend_from_slice(self.candidates.point(candidate));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IgdDistance {
    Euclidean,
    Plus,
}

impl IgdDistance {
    #[inline]
    fn eval(self, s: &[f64], r: &[f64]) -> f64 {
        match self {
            IgdDistance::Euclidean => dist(s, r),
            IgdDistance::Plus => dist_plus(s, r),
        }
    }
}

/// Decrease of IGD (or IGD+) against a reference set.
///
/// The objective maximized is `mean_r (D - min(D, d(S, r)))` with `D` the
/// diagonal of the joint bounding box, which bounds every distance. It is
/// zero on the empty set, monotone and submodular, and differs from
/// `-IGD(S)` by a constant once `S` is nonempty.
pub struct IgdGain<'a> {
    candidates: &'a PointSet,
    references: &'a PointSet,
    metric: IgdDistance,
    nearest: Vec<f64>,
}

impl<'a> IgdGain<'a> {
    pub fn new(candidates: &'a PointSet, references: &'a PointSet, metric: IgdDistance) -> Result<Self> {
        if candidates.dim() != references.dim() {
            return Err(Error::DimensionMismatch {
                expected: references.dim(),
                found: candidates.dim(),
            });
        }
        if references.is_empty() {
            return Err(Error::Empty);
        }
        let m = candidates.dim();
        let mut lo = vec![f64::INFINITY; m];
        let mut hi = vec![f64::NEG_INFINITY; m];
        for p in candidates.iter().chain(references.iter()) {
            for j in 0..m {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        let diagonal = dist(&lo, &hi);
        Ok(Self {
            candidates,
            references,
            metric,
            nearest: vec![diagonal; references.len()],
        })
    }

    /// Distance from each reference point to the current subset, capped at `D`.
    pub fn nearest_distances(&self) -> &[f64] {
        &self.nearest
    }
}

impl GainOracle for IgdGain<'_> {
    fn len(&self) -> usize {
        self.candidates.len()
    }

    fn gain(&self, candidate: usize) -> f64 {
        let s = self.candidates.point(candidate);
        let mut total = 0.0;
        for (r, &cur) in self.references.iter().zip(&self.nearest) {
            let d = self.metric.eval(s, r);
            if d < cur {
                total += cur - d;
            }
        }
        total / self.references.len() as f64
    }

    fn commit(&mut self, candidate: usize) {
        let s = self.candidates.point(candidate);
        let metric = self.metric;
        let refs = self.references;
        exec::for_each_mut(&mut self.nearest, |i, cur| {
            let d = metric.eval(s, refs.point(i));
            if d < *cur {
                *cur = d;
            }
        });
    }
}

/// Greedy hypervolume subset selection with exact contributions.
pub fn select_ghss(a: &PointSet, k: usize, r: &[f64], cancel: &CancelToken) -> Result<Vec<usize>> {
    check_reference(a, r)?;
    lazy_greedy(&mut HvGain::new(a, r), k, cancel)
}

/// Greedy hypervolume subset selection with approximate contributions.
pub fn select_gahss(
    a: &PointSet,
    k: usize,
    r: &[f64],
    dirs: &DirectionVectorSet,
    cancel: &CancelToken,
) -> Result<Vec<usize>> {
    check_reference(a, r)?;
    if dirs.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: dirs.dim(),
        });
    }
    lazy_greedy(&mut HvApproxGain::new(a, r, dirs), k, cancel)
}

/// Greedy IGD subset selection using the candidates as reference set.
pub fn select_gigdss(a: &PointSet, k: usize, cancel: &CancelToken) -> Result<Vec<usize>> {
    lazy_greedy(&mut IgdGain::new(a, a, IgdDistance::Euclidean)?, k, cancel)
}

/// Greedy IGD+ subset selection using the candidates as reference set.
pub fn select_gigdpss(a: &PointSet, k: usize, cancel: &CancelToken) -> Result<Vec<usize>> {
    lazy_greedy(&mut IgdGain::new(a, a, IgdDistance::Plus)?, k, cancel)
}

fn check_reference(a: &PointSet, r: &[f64]) -> Result<()> {
    if r.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: r.len(),
        });
    }
    Ok(())
}
