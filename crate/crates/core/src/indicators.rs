//! IGD, IGD+, additive epsilon and uniformity level.
//!
//! The IGD family measures a set `S` against a reference set `R`; the
//! per-reference-point loops run through [`crate::exec`].

use crate::error::{Error, Result};
use crate::exec;
use crate::point::PointSet;

fn check_pair(s: &PointSet, r: &PointSet) -> Result<()> {
    if s.is_empty() || r.is_empty() {
        return Err(Error::Empty);
    }
    if s.dim() != r.dim() {
        return Err(Error::DimensionMismatch {
            expected: r.dim(),
            found: s.dim(),
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// Dominance-aware distance `d+(s, r) = || max(0, s - r) ||`.
#[inline]
pub(crate) fn dist_plus(s: &[f64], r: &[f64]) -> f64 {
    s.iter()
        .zip(r)
        .map(|(a, b)| {
            let d = (a - b).max(0.0);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn mean_nearest(s: &PointSet, r: &PointSet, d: fn(&[f64], &[f64]) -> f64) -> f64 {
    let total = exec::sum_range(r.len(), |i| {
        let q = r.point(i);
        s.iter().map(|p| d(p, q)).fold(f64::INFINITY, f64::min)
    });
    total / r.len() as f64
}

/// Mean distance from each reference point to its nearest member of `s`.
pub fn igd(s: &PointSet, r: &PointSet) -> Result<f64> {
    check_pair(s, r)?;
    Ok(mean_nearest(s, r, dist))
}

/// IGD with the dominance-aware distance `d+`.
pub fn igd_plus(s: &PointSet, r: &PointSet) -> Result<f64> {
    check_pair(s, r)?;
    Ok(mean_nearest(s, r, dist_plus))
}

/// Additive epsilon indicator: the smallest shift that makes `s` weakly
/// dominate every reference point.
pub fn eps_plus(s: &PointSet, r: &PointSet) -> Result<f64> {
    check_pair(s, r)?;
    Ok(exec::max_range(r.len(), |i| {
        let q = r.point(i);
        s.iter()
            .map(|p| {
                p.iter()
                    .zip(q)
                    .map(|(a, b)| a - b)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }))
}

/// Minimum pairwise Euclidean distance over the multiset `s`.
pub fn uniformity(s: &PointSet) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::InvalidParameter(
            "uniformity needs at least two points".into(),
        ));
    }
    let n = s.len();
    let min_sq = exec::map_range(n - 1, |i| {
        let p = s.point(i);
        (i + 1..n)
            .map(|j| sq_dist(p, s.point(j)))
            .fold(f64::INFINITY, f64::min)
    })
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    Ok(min_sq.sqrt())
}
