//! Brute-force oracles shared by the integration tests. Everything here is
//! written independently of the library code it checks.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(rng: &mut impl Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..m).map(|_| rng.random::<f64>()).collect()).collect()
}

/// Random points on the simplex-like surface `sum f = 1`, so that most are
/// mutually non-dominated.
pub fn random_front(rng: &mut impl Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let e: Vec<f64> = (0..m).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
            let s: f64 = e.iter().sum();
            e.iter().map(|v| v / s).collect()
        })
        .collect()
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

pub fn euclid_plus(s: &[f64], r: &[f64]) -> f64 {
    let mut t = 0.0;
    for i in 0..s.len() {
        let d = if s[i] > r[i] { s[i] - r[i] } else { 0.0 };
        t += d * d;
    }
    t.sqrt()
}

pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    weakly_dominates(a, b) && a != b
}

/// Exact hypervolume by summing the grid cells spanned by all coordinates;
/// O(n^m) cells, so only for a handful of points.
pub fn hv_grid(points: &[Vec<f64>], r: &[f64]) -> f64 {
    let m = r.len();
    let pts: Vec<&Vec<f64>> = points.iter().filter(|p| p.iter().zip(r).all(|(a, b)| a < b)).collect();
    if pts.is_empty() {
        return 0.0;
    }
    let axes: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let mut c: Vec<f64> = pts.iter().map(|p| p[j]).collect();
            c.push(r[j]);
            c.sort_by(f64::total_cmp);
            c.dedup();
            c
        })
        .collect();
    let mut idx = vec![0usize; m];
    let mut total = 0.0;
    'cells: loop {
        let lower: Vec<f64> = (0..m).map(|j| axes[j][idx[j]]).collect();
        if idx.iter().enumerate().all(|(j, &i)| i + 1 < axes[j].len())
            && pts.iter().any(|p| weakly_dominates(p, &lower))
        {
            total += (0..m).map(|j| axes[j][idx[j] + 1] - axes[j][idx[j]]).product::<f64>();
        }
        for j in 0..m {
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                continue 'cells;
            }
            idx[j] = 0;
        }
        break;
    }
    total
}

/// Monte-Carlo hypervolume in the box `[ideal, r]`: estimate and standard
/// error.
pub fn hv_monte_carlo(points: &[Vec<f64>], r: &[f64], samples: usize, rng: &mut impl Rng) -> (f64, f64) {
    let m = r.len();
    let lo: Vec<f64> = (0..m)
        .map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let volume: f64 = (0..m).map(|j| r[j] - lo[j]).product();
    let mut hits = 0u64;
    let mut x = vec![0.0; m];
    for _ in 0..samples {
        for j in 0..m {
            x[j] = lo[j] + rng.random::<f64>() * (r[j] - lo[j]);
        }
        if points.iter().any(|p| weakly_dominates(p, &x)) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    (volume * p, volume * (p * (1.0 - p) / samples as f64).sqrt())
}

pub fn igd_brute(s: &[Vec<f64>], r: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for q in r {
        let mut best = f64::INFINITY;
        for p in s {
            best = best.min(euclid(p, q));
        }
        total += best;
    }
    total / r.len() as f64
}

pub fn igd_plus_brute(s: &[Vec<f64>], r: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for q in r {
        let mut best = f64::INFINITY;
        for p in s {
            best = best.min(euclid_plus(p, q));
        }
        total += best;
    }
    total / r.len() as f64
}

pub fn eps_plus_brute(s: &[Vec<f64>], r: &[Vec<f64>]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for q in r {
        let mut best = f64::INFINITY;
        for p in s {
            let mut shift = f64::NEG_INFINITY;
            for j in 0..q.len() {
                shift = shift.max(p[j] - q[j]);
            }
            best = best.min(shift);
        }
        worst = worst.max(best);
    }
    worst
}

pub fn uniformity_brute(s: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..s.len() {
        for j in 0..s.len() {
            if i != j {
                best = best.min(euclid(&s[i], &s[j]));
            }
        }
    }
    best
}

/// Greedy maximization evaluating every remaining candidate at every step;
/// ties go to the smallest index.
pub fn naive_greedy(n: usize, k: usize, mut gain: impl FnMut(&[usize], usize) -> f64) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for c in 0..n {
            if chosen.contains(&c) {
                continue;
            }
            let g = gain(&chosen, c);
            if best.is_none_or(|(_, b)| g > b) {
                best = Some((c, g));
            }
        }
        chosen.push(best.unwrap().0);
    }
    chosen
}

/// The capped IGD utility `mean_r (D - min(D, d(S, r)))` that greedy IGD
/// selection maximizes.
pub fn igd_utility(s: &[&Vec<f64>], r: &[Vec<f64>], cap: f64, plus: bool) -> f64 {
    let mut total = 0.0;
    for q in r {
        let mut best = cap;
        for p in s {
            let d = if plus { euclid_plus(p, q) } else { euclid(p, q) };
            best = best.min(d);
        }
        total += cap - best;
    }
    total / r.len() as f64
}

/// Diagonal of the bounding box of `pts`.
pub fn diagonal(pts: &[Vec<f64>]) -> f64 {
    let m = pts[0].len();
    let lo: Vec<f64> = (0..m).map(|j| pts.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..m).map(|j| pts.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    euclid(&lo, &hi)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Kolmogorov-Smirnov distance between the sample and Uniform(0, 1).
pub fn ks_uniform(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((x - lo).abs()).max((hi - x).abs());
    }
    d
}

/// Two-sample chi-square statistic over equal-width bins on [0, 1].
pub fn chi2_two_sample(a: &[f64], b: &[f64], bins: usize) -> f64 {
    let count = |xs: &[f64]| {
        let mut h = vec![0f64; bins];
        for &x in xs {
            h[((x * bins as f64) as usize).min(bins - 1)] += 1.0;
        }
        h
    };
    let (ha, hb) = (count(a), count(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    ha.iter()
        .zip(&hb)
        .filter(|(x, y)| **x + **y > 0.0)
        .map(|(x, y)| (ka * x - kb * y).powi(2) / (x + y))
        .sum()
}

/// Upper 1% point of the chi-square distribution with `df` degrees of
/// freedom (Wilson-Hilferty approximation, accurate to well under 1% here).
pub fn chi2_critical_1pct(df: usize) -> f64 {
    let k = df as f64;
    let z = 2.326_347_874;
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t * t * t
}
