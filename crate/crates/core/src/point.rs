//! Objective-space data model.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An ordered collection of `m`-dimensional objective vectors (minimization).
///
/// Points are stored row-major in one contiguous buffer. Duplicates are
/// allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    m: usize,
    data: Vec<f64>,
    label: Option<String>,
}

impl PointSet {
    /// Builds a point set from a row-major buffer of `data.len() / m` points.
    pub fn new(m: usize, data: Vec<f64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::TooFewObjectives(m));
        }
        if !data.len().is_multiple_of(m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: data.len() % m,
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                point: pos / m,
                objective: pos % m,
            });
        }
        Ok(Self { m, data, label: None })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty)?;
        let m = first.as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * m);
        for row in rows {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(m, data)
    }

    /// An empty set with `m` objectives.
    pub fn empty(m: usize) -> Result<Self> {
        Self::new(m, Vec::new())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Number of objectives.
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.m
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.m)
    }

    /// The flat row-major buffer.
    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.data
    }

    /// Appends a point, validating its length and finiteness.
    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: p.len(),
            });
        }
        if let Some(j) = p.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                point: self.len(),
                objective: j,
            });
        }
        self.data.extend_from_slice(p);
        Ok(())
    }

    /// Points at `indices`, in that order (repeated indices repeat points).
    ///
    /// Panics if an index is out of range.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut data = Vec::with_capacity(indices.len() * self.m);
        for &i in indices {
            data.extend_from_slice(self.point(i));
        }
        PointSet {
            m: self.m,
            data,
            label: self.label.clone(),
        }
    }

    /// Number of pairwise distinct points.
    pub fn distinct_count(&self) -> usize {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| lex_cmp(self.point(a), self.point(b)));
        order
            .windows(2)
            .filter(|w| self.point(w[0]) != self.point(w[1]))
            .count()
            + usize::from(!order.is_empty())
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// `a` Pareto-dominates `b`: no worse anywhere, strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Indices of the points of a row-major buffer not dominated by any other.
///
/// Points are visited in ascending order of their coordinate sum (ties
/// broken lexicographically), so a dominator is always visited before the
/// points it dominates and each point only needs to be checked against the
/// survivors so far. Returned indices are ascending.
pub(crate) fn nondominated_indices(data: &[f64], m: usize) -> Vec<usize> {
    let n = data.len() / m;
    let row = |i: usize| &data[i * m..(i + 1) * m];
    let sums: Vec<f64> = (0..n).map(|i| row(i).iter().sum()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        sums[a]
            .total_cmp(&sums[b])
            .then_with(|| lex_cmp(row(a), row(b)))
    });
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order {
        let p = row(i);
        if !kept.iter().any(|&j| dominates_unchecked(row(j), p)) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept
}

/// The points of `a` not dominated by any other point of `a`, in their
/// original order. Exact duplicates are all kept.
pub fn nondominated_filter(a: &PointSet) -> PointSet {
    let keep = nondominated_indices(a.as_flat(), a.dim());
    a.select(&keep)
}

/// Componentwise minimum (ideal) and maximum (nadir) over `a`.
pub fn ideal_nadir(a: &PointSet) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    let mut ideal = a.point(0).to_vec();
    let mut nadir = ideal.clone();
    for p in a.iter() {
        for j in 0..a.dim() {
            ideal[j] = ideal[j].min(p[j]);
            nadir[j] = nadir[j].max(p[j]);
        }
    }
    Ok((ideal, nadir))
}

/// `factor` times `nadir`, componentwise.
pub fn reference_point(nadir: &[f64], factor: f64) -> Result<Vec<f64>> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "reference point factor must be positive, got {factor}"
        )));
    }
    Ok(nadir.iter().map(|v| v * factor).collect())
}

/// Default factor applied to a nadir point to obtain a reference point.
pub const REFERENCE_FACTOR: f64 = 1.2;

/// A 64-bit seed with deterministic named sub-streams.
///
/// `derive(name)` hashes the stream name with 64-bit FNV-1a, combines it
/// with the parent seed and passes the result through the SplitMix64
/// finalizer. Generators are ChaCha8 seeded through
/// [`SeedableRng::seed_from_u64`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

impl Seed {
    pub fn derive(self, stream: &str) -> Seed {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in stream.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        Seed(splitmix64(self.0 ^ h.rotate_left(17)))
    }

    /// Child seed for the `index`-th member of a numbered family of streams.
    pub fn derive_index(self, stream: &str, index: u64) -> Seed {
        let base = self.derive(stream);
        Seed(splitmix64(base.0 ^ splitmix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15))))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
