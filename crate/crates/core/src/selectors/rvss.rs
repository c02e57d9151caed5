//! Reference-vector-based subset selection (RVSS).
//!
//! Every reference vector picks the candidate closest to it, so the result
//! has one entry per vector and may repeat candidates.

use crate::error::{Error, Result};
use crate::exec;
use crate::point::{ideal_nadir, PointSet};

use super::reference_vectors::ReferenceVectorSet;
use super::CancelToken;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvssDistance {
    /// Length of the component of `s` orthogonal to `v`.
    Perpendicular,
    /// `1 - cos(s, v)`.
    Angle,
}

/// Perpendicular distance from `s` to the line spanned by `v`.
pub fn perpendicular_distance(s: &[f64], v: &[f64]) -> f64 {
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let sv: f64 = s.iter().zip(v).map(|(a, b)| a * b).sum();
    let scale = if vv > 0.0 { sv / vv } else { 0.0 };
    s.iter()
        .zip(v)
        .map(|(a, b)| {
            let r = a - scale * b;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Angle distance `1 - s.v / (|s| |v|)`; `+inf` for a zero vector so that
/// such a candidate is only chosen when nothing else is available.
pub fn angle_distance(s: &[f64], v: &[f64]) -> f64 {
    let ss: f64 = s.iter().map(|x| x * x).sum();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    if ss == 0.0 || vv == 0.0 {
        return f64::INFINITY;
    }
    let sv: f64 = s.iter().zip(v).map(|(a, b)| a * b).sum();
    1.0 - sv / (ss * vv).sqrt()
}

/// For each reference vector, the candidate nearest to it under `distance`
/// (smallest index on ties). With `translate`, candidates are shifted by
/// their ideal point first.
pub fn select_rvss(
    a: &PointSet,
    vectors: &ReferenceVectorSet,
    distance: RvssDistance,
    translate: bool,
    cancel: &CancelToken,
) -> Result<Vec<usize>> {
    if vectors.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: vectors.dim(),
        });
    }
    let shifted;
    let pts = if translate {
        let (ideal, _) = ideal_nadir(a)?;
        let m = a.dim();
        let data = a
            .as_flat()
            .iter()
            .enumerate()
            .map(|(i, v)| v - ideal[i % m])
            .collect();
        shifted = PointSet::new(m, data)?;
        &shifted
    } else {
        a
    };
    let d = match distance {
        RvssDistance::Perpendicular => perpendicular_distance,
        RvssDistance::Angle => angle_distance,
    };
    let mut picked = Vec::with_capacity(vectors.len());
    for v in vectors.iter() {
        cancel.check()?;
        let (i, _) = exec::argmin_range(pts.len(), |i| d(pts.point(i), v)).ok_or(Error::Empty)?;
        picked.push(i);
    }
    Ok(picked)
}
