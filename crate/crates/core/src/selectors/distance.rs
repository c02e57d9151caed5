//! Distance-based subset selection (DSS) and its iterated variant (IDSS).

use rand::Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::indicators::sq_dist;
use crate::point::{PointSet, Seed};

use super::CancelToken;

fn check_k(a: &PointSet, k: usize) -> Result<()> {
    if k == 0 || k > a.len() {
        return Err(Error::SubsetTooLarge {
            k,
            available: a.len(),
        });
    }
    Ok(())
}

/// Candidate with the largest first objective (an extreme point of the
/// front), smallest index on ties.
pub fn dss_initial_point(a: &PointSet) -> usize {
    exec::argmax_range(a.len(), |i| a.point(i)[0])
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Farthest-point traversal from `init`: each step adds the candidate whose
/// distance to the current subset is largest (smallest index on ties).
pub fn dss_from(a: &PointSet, k: usize, init: usize, cancel: &CancelToken) -> Result<Vec<usize>> {
    check_k(a, k)?;
    let n = a.len();
    let mut chosen = vec![false; n];
    let mut selected = Vec::with_capacity(k);
    let mut nearest = vec![f64::INFINITY; n];
    let mut next = init;
    loop {
        chosen[next] = true;
        selected.push(next);
        if selected.len() == k {
            break;
        }
        cancel.check()?;
        let p = a.point(next);
        exec::for_each_mut(&mut nearest, |i, d| {
            let e = sq_dist(p, a.point(i));
            if e < *d {
                *d = e;
            }
        });
        let chosen_ref = &chosen;
        let nearest_ref = &nearest;
        next = exec::argmax_filtered(n, |i| !chosen_ref[i], |i| nearest_ref[i])
            .map(|(i, _)| i)
            .expect("k <= n leaves an unchosen candidate");
    }
    Ok(selected)
}

/// DSS starting from [`dss_initial_point`].
pub fn select_dss(a: &PointSet, k: usize, cancel: &CancelToken) -> Result<Vec<usize>> {
    dss_from(a, k, dss_initial_point(a), cancel)
}

// Squared distance and slot of the closest pair among `members`, skipping
// slot `skip`. Ties go to the lexicographically smallest slot pair.
fn closest_pair(a: &PointSet, members: &[usize], skip: Option<usize>) -> (f64, usize, usize) {
    let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
    for x in 0..members.len() {
        if Some(x) == skip {
            continue;
        }
        let p = a.point(members[x]);
        for y in x + 1..members.len() {
            if Some(y) == skip {
                continue;
            }
            let d = sq_dist(p, a.point(members[y]));
            if d < best.0 {
                best = (d, x, y);
            }
        }
    }
    best
}

/// Iterated DSS.
///
/// Starts from a DSS subset grown from a seeded random initial point. Each
/// iteration picks the closest pair of the subset, drops one of its two
/// endpoints at random, and adds the candidate farthest from the remaining
/// members. The swap is kept when the uniformity level (minimum pairwise
/// distance) does not decrease. Runs for exactly `max_iter` iterations.
pub fn select_idss(
    a: &PointSet,
    k: usize,
    max_iter: usize,
    seed: Seed,
    cancel: &CancelToken,
) -> Result<Vec<usize>> {
    check_k(a, k)?;
    let n = a.len();
    let mut rng = seed.derive("idss").rng();
    let init = rng.random_range(0..n);
    let mut members = dss_from(a, k, init, cancel)?;
    if k < 2 || max_iter == 0 {
        return Ok(members);
    }

    let mut in_subset = vec![false; n];
    for &i in &members {
        in_subset[i] = true;
    }
    // Per candidate: squared distance to, and slot of, its nearest member.
    let nearest_of = |members: &[usize], i: usize, skip: Option<usize>| -> (f64, usize) {
        let p = a.point(i);
        let mut best = (f64::INFINITY, usize::MAX);
        for (slot, &j) in members.iter().enumerate() {
            if Some(slot) == skip {
                continue;
            }
            let d = sq_dist(p, a.point(j));
            if d < best.0 {
                best = (d, slot);
            }
        }
        best
    };
    let mut near: Vec<(f64, usize)> = exec::map_range(n, |i| nearest_of(&members, i, None));
    let mut trial = near.clone();
    let mut level = closest_pair(a, &members, None).0;

    for _ in 0..max_iter {
        cancel.check()?;
        let (_, x, y) = closest_pair(a, &members, None);
        let out = if rng.random_bool(0.5) { x } else { y };
        let removed = members[out];

        let members_ref = &members;
        let near_ref = &near;
        exec::for_each_mut(&mut trial, |i, t| {
            *t = if near_ref[i].1 == out {
                nearest_of(members_ref, i, Some(out))
            } else {
                near_ref[i]
            };
        });
        in_subset[removed] = false;
        let subset_ref = &in_subset;
        let trial_ref = &trial;
        let (added, gap) = exec::argmax_filtered(n, |i| !subset_ref[i], |i| trial_ref[i].0)
            .expect("removed member is always available");
        let rest = closest_pair(a, &members, Some(out)).0;
        let new_level = rest.min(gap);
        if new_level >= level {
            members[out] = added;
            in_subset[added] = true;
            let p = a.point(added);
            exec::for_each_mut(&mut trial, |i, t| {
                let d = sq_dist(p, a.point(i));
                if d < t.0 {
                    *t = (d, out);
                }
            });
            std::mem::swap(&mut near, &mut trial);
            level = new_level;
        } else {
            in_subset[removed] = true;
        }
    }
    Ok(members)
}
