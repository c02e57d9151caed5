//! Exact hypervolume (WFG) and hypervolume contributions.
//!
//! The exact routine follows the WFG scheme of exclusive volumes over limit
//! sets. At each level the points are sorted by their last objective, worst
//! first, so every later point clipped by the current one shares its last
//! coordinate; the limit set can then be handled one dimension lower and the
//! exclusive volume becomes a slab height times a `(d-1)`-dimensional
//! exclusive volume. Two objectives are solved by a sweep.
//!
//! Points that are not strictly better than the reference point in every
//! objective enclose no volume and are ignored.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::point::{lex_cmp, PointSet, Seed};

/// Default number of direction vectors for approximate contributions.
pub const DEFAULT_DIRECTIONS: usize = 100;

fn check_reference(m: usize, r: &[f64]) -> Result<()> {
    if r.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: r.len(),
        });
    }
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("reference point must be finite".into()));
    }
    Ok(())
}

#[inline]
fn strictly_inside(p: &[f64], r: &[f64]) -> bool {
    p.iter().zip(r).all(|(a, b)| a < b)
}

#[inline]
fn box_volume(p: &[f64], r: &[f64]) -> f64 {
    p.iter().zip(r).map(|(a, b)| b - a).product()
}

/// Exact hypervolume of `s` with respect to the reference point `r`.
pub fn hv_exact(s: &PointSet, r: &[f64]) -> Result<f64> {
    check_reference(s.dim(), r)?;
    Ok(hv_flat(s.as_flat(), s.dim(), r))
}

/// Hypervolume of a row-major buffer of `d`-dimensional points.
pub(crate) fn hv_flat(data: &[f64], d: usize, r: &[f64]) -> f64 {
    let mut pts: Vec<f64> = Vec::with_capacity(data.len());
    for p in data.chunks_exact(d) {
        if strictly_inside(p, r) {
            pts.extend_from_slice(p);
        }
    }
    if d > 2 {
        pts = prune_weakly_dominated(&pts, d);
    }
    hv_rec(&mut pts, d, r)
}

// Keeps one copy of every point not weakly dominated by another.
fn prune_weakly_dominated(pts: &[f64], d: usize) -> Vec<f64> {
    let n = pts.len() / d;
    if n < 2 {
        return pts.to_vec();
    }
    let row = |i: usize| &pts[i * d..(i + 1) * d];
    let sums: Vec<f64> = (0..n).map(|i| row(i).iter().sum()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sums[a].total_cmp(&sums[b]).then_with(|| lex_cmp(row(a), row(b))));
    let mut kept: Vec<f64> = Vec::with_capacity(pts.len());
    for &i in &order {
        let p = row(i);
        let covered = kept
            .chunks_exact(d)
            .any(|q| q.iter().zip(p).all(|(a, b)| a <= b));
        if !covered {
            kept.extend_from_slice(p);
        }
    }
    kept
}

fn sweep_2d(pts: &mut [f64], r: &[f64]) -> f64 {
    let n = pts.len() / 2;
    let mut order: Vec<(f64, f64)> = (0..n).map(|i| (pts[2 * i], pts[2 * i + 1])).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut area = 0.0;
    let mut floor = r[1];
    for (x, y) in order {
        if y < floor {
            area += (r[0] - x) * (floor - y);
            floor = y;
        }
    }
    area
}

// `pts` holds points strictly inside `r` with no weakly dominated members
// (except in two dimensions, where the sweep copes with them).
fn hv_rec(pts: &mut [f64], d: usize, r: &[f64]) -> f64 {
    let n = pts.len() / d;
    match n {
        0 => return 0.0,
        1 => return box_volume(&pts[..d], r),
        _ => {}
    }
    if d == 2 {
        return sweep_2d(pts, r);
    }
    let last = d - 1;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| pts[b * d + last].total_cmp(&pts[a * d + last]));
    let sorted: Vec<f64> = order
        .iter()
        .flat_map(|&i| pts[i * d..(i + 1) * d].iter().copied())
        .collect();

    let sub = last;
    let mut limit: Vec<f64> = Vec::with_capacity(n * sub);
    let mut total = 0.0;
    for i in 0..n {
        let p = &sorted[i * d..(i + 1) * d];
        let height = r[last] - p[last];
        limit.clear();
        for q in sorted[(i + 1) * d..].chunks_exact(d) {
            for j in 0..sub {
                limit.push(p[j].max(q[j]));
            }
        }
        let inner = if sub > 2 {
            let mut pruned = prune_weakly_dominated(&limit, sub);
            hv_rec(&mut pruned, sub, r)
        } else {
            hv_rec(&mut limit, sub, r)
        };
        total += height * (box_volume(&p[..sub], &r[..sub]) - inner);
    }
    total
}

/// Volume dominated by `p` and by none of `others` (within `r`).
pub(crate) fn exclusive_hv<'a, I>(p: &[f64], others: I, r: &[f64]) -> f64
where
    I: IntoIterator<Item = &'a [f64]>,
{
    if !strictly_inside(p, r) {
        return 0.0;
    }
    let d = p.len();
    let mut limit = Vec::new();
    for q in others {
        let clipped = p.iter().zip(q).map(|(a, b)| a.max(*b));
        limit.extend(clipped);
    }
    let covered = hv_flat(&limit, d, r);
    (box_volume(p, r) - covered).max(0.0)
}

/// Hypervolume lost when point `i` is removed from `s`.
pub fn hv_contribution(i: usize, s: &PointSet, r: &[f64]) -> Result<f64> {
    check_reference(s.dim(), r)?;
    check_index(i, s)?;
    let others = s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q);
    Ok(exclusive_hv(s.point(i), others, r))
}

fn check_index(i: usize, s: &PointSet) -> Result<()> {
    if i >= s.len() {
        return Err(Error::InvalidParameter(format!(
            "index {i} out of range for {} points",
            s.len()
        )));
    }
    Ok(())
}

/// Nonnegative unit vectors used to probe contributions along rays.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionVectorSet {
    m: usize,
    vectors: Vec<f64>,
    // Reciprocal components, +inf for zero components.
    inverse: Vec<f64>,
}

impl DirectionVectorSet {
    pub fn new(m: usize, vectors: Vec<f64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::TooFewObjectives(m));
        }
        if vectors.is_empty() || !vectors.len().is_multiple_of(m) {
            return Err(Error::InvalidParameter(
                "direction set must hold at least one complete vector".into(),
            ));
        }
        for v in vectors.chunks_exact(m) {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if v.iter().any(|&x| !(x >= 0.0 && x.is_finite())) || (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(
                    "direction vectors must be nonnegative with unit length".into(),
                ));
            }
        }
        let inverse = vectors
            .iter()
            .map(|&x| if x > 0.0 { 1.0 / x } else { f64::INFINITY })
            .collect();
        Ok(Self { m, vectors, inverse })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.vectors.len() / self.m
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.m..(i + 1) * self.m]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.vectors.chunks_exact(self.m)
    }
}

/// `count` directions drawn uniformly on the positive-orthant unit sphere
/// (absolute values of normalized standard Gaussian vectors).
pub fn generate_directions(m: usize, count: usize, seed: Seed) -> Result<DirectionVectorSet> {
    if count == 0 {
        return Err(Error::InvalidParameter("direction count must be positive".into()));
    }
    let mut rng = seed.rng();
    let mut vectors = Vec::with_capacity(count * m);
    let mut row = vec![0.0; m];
    for _ in 0..count {
        let norm = loop {
            for v in row.iter_mut() {
                let g: f64 = rng.sample(StandardNormal);
                *v = g.abs();
            }
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                break norm;
            }
        };
        vectors.extend(row.iter().map(|v| v / norm));
    }
    // Re-normalizing can leave a residual of a few ulps; the constructor
    // allows 1e-12.
    DirectionVectorSet::new(m, vectors)
}

/// Surface area of the positive-orthant part of the unit sphere in `m`
/// dimensions, divided by `m`. Multiplying the mean of `l^m` over uniform
/// directions by this factor turns it into a volume estimate.
fn orthant_volume_factor(m: usize) -> f64 {
    // Gamma(m/2) for integer m.
    let half_gamma = if m.is_multiple_of(2) {
        (1..m / 2).map(|k| k as f64).product::<f64>()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < m as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    };
    let sphere_area = 2.0 * std::f64::consts::PI.powf(m as f64 / 2.0) / half_gamma;
    sphere_area / 2f64.powi(m as i32) / m as f64
}

/// Length of the ray from `p` along direction `k` before it leaves the
/// region dominated exclusively by `p`, clamped at zero.
#[inline]
fn ray_length<'a, I>(p: &[f64], others: I, r: &[f64], dirs: &DirectionVectorSet, k: usize) -> f64
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let inv = &dirs.inverse[k * dirs.m..(k + 1) * dirs.m];
    let mut len = f64::INFINITY;
    for j in 0..p.len() {
        len = len.min((r[j] - p[j]) * inv[j]);
    }
    for q in others {
        // q blocks the ray from the smallest t with q <= p + t*lambda.
        let mut t = f64::NEG_INFINITY;
        for j in 0..p.len() {
            let diff = q[j] - p[j];
            let tj = if inv[j].is_finite() {
                diff * inv[j]
            } else if diff > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
            if tj > t {
                t = tj;
                if t >= len {
                    break;
                }
            }
        }
        if t < len {
            len = t;
            if len <= 0.0 {
                return 0.0;
            }
        }
    }
    len.max(0.0)
}

/// Ray-based estimate of the volume dominated by `p` and none of `others`.
pub(crate) fn approx_exclusive_hv<'a, I>(
    p: &[f64],
    others: I,
    r: &[f64],
    dirs: &DirectionVectorSet,
) -> f64
where
    I: IntoIterator<Item = &'a [f64]> + Clone,
{
    if !strictly_inside(p, r) {
        return 0.0;
    }
    let m = p.len() as i32;
    let mut acc = 0.0;
    for k in 0..dirs.len() {
        let l = ray_length(p, others.clone(), r, dirs, k);
        acc += l.powi(m);
    }
    orthant_volume_factor(p.len()) * acc / dirs.len() as f64
}

/// Approximate hypervolume contribution of point `i` of `s`.
///
/// Every direction `lambda` measures how far the ray `s_i + t * lambda` runs
/// before it is dominated by another point of `s` or leaves the reference
/// box; the contribution is estimated from the mean `m`-th power of those
/// lengths, scaled to a volume.
pub fn hv_contribution_approx(
    i: usize,
    s: &PointSet,
    r: &[f64],
    dirs: &DirectionVectorSet,
) -> Result<f64> {
    check_reference(s.dim(), r)?;
    check_index(i, s)?;
    if dirs.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: dirs.dim(),
        });
    }
    let others = s.iter().enumerate().filter(move |(j, _)| *j != i).map(|(_, q)| q);
    Ok(approx_exclusive_hv(s.point(i), others, r, dirs))
}
