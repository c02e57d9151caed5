//! Clustering-based subset selection: k-means representatives (CSS-MEA)
//! and k-medoids by Voronoi iteration (CSS-MED).

use std::collections::HashSet;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::exec;
use crate::indicators::{dist, sq_dist};
use crate::point::{PointSet, Seed};

use super::CancelToken;

/// `k` indices of pairwise distinct points, chosen uniformly at random.
pub fn distinct_initial_points(a: &PointSet, k: usize, seed: Seed) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.shuffle(&mut seed.rng());
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(k);
    let mut picked = Vec::with_capacity(k);
    for i in order {
        let key: Vec<u64> = a.point(i).iter().map(|v| v.to_bits()).collect();
        if seen.insert(key) {
            picked.push(i);
            if picked.len() == k {
                return Ok(picked);
            }
        }
    }
    Err(Error::SubsetTooLarge {
        k,
        available: picked.len(),
    })
}

// Index of the nearest center (row-major `centers`), smallest on ties.
#[inline]
fn nearest_center(p: &[f64], centers: &[f64], m: usize) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, row) in centers.chunks_exact(m).enumerate() {
        let d = sq_dist(p, row);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn assign(a: &PointSet, centers: &[f64]) -> Vec<(usize, f64)> {
    let m = a.dim();
    exec::map_range(a.len(), |i| nearest_center(a.point(i), centers, m))
}

fn members_by_cluster(labels: &[(usize, f64)], k: usize) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); k];
    for (i, &(c, _)) in labels.iter().enumerate() {
        groups[c].push(i);
    }
    groups
}

// Moves, for every empty cluster, the point farthest from its own center
// (among clusters with at least two members) into it and centers the
// cluster on that point.
fn fill_empty(a: &PointSet, labels: &mut [(usize, f64)], centers: &mut [f64], k: usize) {
    let m = a.dim();
    let mut sizes = vec![0usize; k];
    for &(c, _) in labels.iter() {
        sizes[c] += 1;
    }
    for c in 0..k {
        if sizes[c] > 0 {
            continue;
        }
        let far = (0..labels.len())
            .filter(|&i| sizes[labels[i].0] > 1)
            .fold(None, |best: Option<(usize, f64)>, i| match best {
                Some((_, d)) if labels[i].1 <= d => best,
                _ => Some((i, labels[i].1)),
            });
        let Some((i, _)) = far else { return };
        sizes[labels[i].0] -= 1;
        sizes[c] = 1;
        labels[i] = (c, 0.0);
        centers[c * m..(c + 1) * m].copy_from_slice(a.point(i));
    }
}

// Member of `group` with the smallest total distance to the other members;
// `prefer` wins ties, otherwise the smallest index does.
fn group_medoid(a: &PointSet, group: &[usize], prefer: Option<usize>) -> usize {
    let costs = exec::map_range(group.len(), |x| {
        let p = a.point(group[x]);
        group.iter().map(|&j| dist(p, a.point(j))).sum::<f64>()
    });
    let mut best = (group[0], costs[0]);
    for (x, &cost) in costs.iter().enumerate().skip(1) {
        if cost < best.1 {
            best = (group[x], cost);
        }
    }
    match prefer {
        Some(p) => {
            let own = group.iter().position(|&g| g == p).map(|x| costs[x]);
            if own == Some(best.1) {
                p
            } else {
                best.0
            }
        }
        None => best.0,
    }
}

/// k-means (Lloyd) clustering; each cluster contributes the member with the
/// smallest total distance to the other members of its cluster.
pub fn select_css_means(
    a: &PointSet,
    k: usize,
    max_iter: usize,
    seed: Seed,
    cancel: &CancelToken,
) -> Result<Vec<usize>> {
    let m = a.dim();
    let init = distinct_initial_points(a, k, seed.derive("css-means"))?;
    let mut centers: Vec<f64> = init.iter().flat_map(|&i| a.point(i).to_vec()).collect();
    let mut labels = assign(a, &centers);
    fill_empty(a, &mut labels, &mut centers, k);

    for _ in 0..max_iter {
        cancel.check()?;
        let mut sums = vec![0.0; k * m];
        let mut counts = vec![0usize; k];
        for (i, &(c, _)) in labels.iter().enumerate() {
            counts[c] += 1;
            for (s, v) in sums[c * m..(c + 1) * m].iter_mut().zip(a.point(i)) {
                *s += v;
            }
        }
        for c in 0..k {
            for j in 0..m {
                centers[c * m + j] = sums[c * m + j] / counts[c] as f64;
            }
        }
        let mut next = assign(a, &centers);
        fill_empty(a, &mut next, &mut centers, k);
        let stable = next.iter().zip(&labels).all(|(x, y)| x.0 == y.0);
        labels = next;
        if stable {
            break;
        }
    }

    cancel.check()?;
    let groups = members_by_cluster(&labels, k);
    groups
        .iter()
        .map(|g| match g.is_empty() {
            true => Err(Error::SubsetTooLarge { k, available: a.distinct_count() }),
            false => Ok(group_medoid(a, g, None)),
        })
        .collect()
}

/// k-medoids by Voronoi iteration: assign every point to its nearest
/// medoid, then move each medoid to the member minimizing the total
/// distance within its cluster, until the medoids stop changing.
pub fn select_css_medoids(
    a: &PointSet,
    k: usize,
    max_iter: usize,
    seed: Seed,
    cancel: &CancelToken,
) -> Result<Vec<usize>> {
    let mut medoids = distinct_initial_points(a, k, seed.derive("css-medoids"))?;
    for _ in 0..max_iter {
        cancel.check()?;
        let centers: Vec<f64> = medoids.iter().flat_map(|&i| a.point(i).to_vec()).collect();
        let labels = assign(a, &centers);
        let groups = members_by_cluster(&labels, k);
        let mut next = Vec::with_capacity(k);
        for (c, g) in groups.iter().enumerate() {
            cancel.check()?;
            // Medoids have pairwise distinct coordinates, so each medoid
            // belongs to its own cluster.
            next.push(if g.is_empty() { medoids[c] } else { group_medoid(a, g, Some(medoids[c])) });
        }
        let stable = next == medoids;
        medoids = next;
        if stable {
            break;
        }
    }
    Ok(medoids)
}

/// Sum over points of the distance to the nearest selected point.
pub fn medoid_cost(a: &PointSet, selected: &[usize]) -> f64 {
    let centers: Vec<f64> = selected.iter().flat_map(|&i| a.point(i).to_vec()).collect();
    assign(a, &centers).iter().map(|(_, d)| d.sqrt()).sum()
}
