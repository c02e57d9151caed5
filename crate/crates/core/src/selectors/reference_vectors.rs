//! Das–Dennis simplex-lattice reference vectors.

use crate::error::{Error, Result};

/// Weight vectors on the unit simplex, from one or two lattice layers.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceVectorSet {
    m: usize,
    vectors: Vec<f64>,
    layers: Vec<usize>,
}

impl ReferenceVectorSet {
    /// Wraps explicit vectors (row-major, `m` per row).
    pub fn from_flat(m: usize, vectors: Vec<f64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::TooFewObjectives(m));
        }
        if vectors.is_empty() || !vectors.len().is_multiple_of(m) {
            return Err(Error::InvalidParameter(
                "reference vectors must hold at least one complete vector".into(),
            ));
        }
        if vectors.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "reference vector components must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            m,
            vectors,
            layers: Vec::new(),
        })
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

    /// Lattice divisions per layer (empty for explicit vectors).
    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn describe(&self) -> String {
        if self.layers.is_empty() {
            format!("explicit:{}", self.len())
        } else {
            let h: Vec<String> = self.layers.iter().map(|h| h.to_string()).collect();
            format!("das-dennis:H={}", h.join("+"))
        }
    }
}

/// `C(n, r)` for the small arguments used by lattice sizes.
pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of lattice points with `h` divisions in `m` objectives.
pub fn lattice_size(m: usize, h: usize) -> usize {
    binomial(h + m - 1, m - 1)
}

fn lattice(m: usize, h: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(lattice_size(m, h) * m);
    let mut parts = vec![0usize; m];
    fn fill(parts: &mut [usize], pos: usize, left: usize, h: usize, out: &mut Vec<f64>) {
        if pos == parts.len() - 1 {
            parts[pos] = left;
            out.extend(parts.iter().map(|&p| p as f64 / h as f64));
            return;
        }
        for v in (0..=left).rev() {
            parts[pos] = v;
            fill(parts, pos + 1, left - v, h, out);
        }
    }
    fill(&mut parts, 0, h, h, &mut out);
    out
}

fn check(m: usize, h: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::TooFewObjectives(m));
    }
    if h == 0 {
        return Err(Error::InvalidParameter("lattice divisions must be at least 1".into()));
    }
    Ok(())
}

/// All simplex-lattice points with denominator `h`.
pub fn das_dennis(m: usize, h: usize) -> Result<ReferenceVectorSet> {
    check(m, h)?;
    Ok(ReferenceVectorSet {
        m,
        vectors: lattice(m, h),
        layers: vec![h],
    })
}

/// Outer lattice with `h1` divisions plus an inner lattice with `h2`
/// divisions shrunk towards the centroid by `v -> v/2 + 1/(2m)`.
pub fn two_layer(m: usize, h1: usize, h2: usize) -> Result<ReferenceVectorSet> {
    check(m, h1)?;
    check(m, h2)?;
    let mut vectors = lattice(m, h1);
    let shift = 1.0 / (2.0 * m as f64);
    vectors.extend(lattice(m, h2).into_iter().map(|v| v / 2.0 + shift));
    Ok(ReferenceVectorSet {
        m,
        vectors,
        layers: vec![h1, h2],
    })
}

/// Standard subset size (population size) for `m` objectives.
pub fn standard_k(m: usize) -> Option<usize> {
    standard_layers(m).map(|(h1, h2)| lattice_size(m, h1) + h2.map_or(0, |h| lattice_size(m, h)))
}

fn standard_layers(m: usize) -> Option<(usize, Option<usize>)> {
    match m {
        3 => Some((12, None)),
        5 => Some((6, None)),
        8 | 10 => Some((3, Some(2))),
        _ => None,
    }
}

/// The standard reference vectors for 3, 5, 8 and 10 objectives
/// (91, 210, 156 and 275 vectors).
pub fn standard_reference_vectors(m: usize) -> Option<ReferenceVectorSet> {
    match standard_layers(m)? {
        (h, None) => das_dennis(m, h).ok(),
        (h1, Some(h2)) => two_layer(m, h1, h2).ok(),
    }
}

/// Reference vectors with exactly `k` members: the standard set when it
/// has size `k`, otherwise a single layer of matching size.
pub fn for_subset_size(m: usize, k: usize) -> Result<ReferenceVectorSet> {
    if let Some(v) = standard_reference_vectors(m).filter(|v| v.len() == k) {
        return Ok(v);
    }
    let mut h = 1;
    while lattice_size(m, h) < k {
        h += 1;
    }
    if lattice_size(m, h) == k {
        return das_dennis(m, h);
    }
    Err(Error::InvalidParameter(format!(
        "no Das-Dennis lattice in {m} objectives has exactly {k} vectors; supply reference vectors"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_lattice() {
        let v = das_dennis(3, 1).unwrap();
        let rows: Vec<&[f64]> = v.iter().collect();
        assert_eq!(rows, vec![&[1.0, 0.0, 0.0][..], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
    }

    #[test]
    fn standard_sizes() {
        assert_eq!(das_dennis(3, 12).unwrap().len(), 91);
        assert_eq!(das_dennis(5, 6).unwrap().len(), 210);
        assert_eq!(two_layer(8, 3, 2).unwrap().len(), 156);
        let ten = two_layer(10, 3, 2).unwrap();
        assert_eq!(ten.len(), binomial(12, 9) + binomial(11, 9));
        assert_eq!(ten.len(), 275);
        for (m, k) in [(3, 91), (5, 210), (8, 156), (10, 275)] {
            assert_eq!(standard_k(m), Some(k));
            assert_eq!(standard_reference_vectors(m).unwrap().len(), k);
        }
        assert_eq!(standard_k(4), None);
    }

    #[test]
    fn vectors_lie_on_simplex_without_duplicates() {
        for set in [das_dennis(4, 7).unwrap(), two_layer(10, 3, 2).unwrap()] {
            let rows: Vec<&[f64]> = set.iter().collect();
            for r in &rows {
                assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(r.iter().all(|&x| (0.0..=1.0).contains(&x)));
            }
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    assert_ne!(rows[i], rows[j]);
                }
            }
        }
    }

    #[test]
    fn subset_size_lookup() {
        assert_eq!(for_subset_size(3, 21).unwrap().layers(), &[5]);
        assert_eq!(for_subset_size(10, 275).unwrap().layers(), &[3, 2]);
        assert!(for_subset_size(3, 20).is_err());
        assert!(das_dennis(3, 0).is_err());
    }
}
