//! Tie-averaged rank tables.
//!
//! Within a row, present values are ranked from best to worst and exactly
//! equal values share the mean of their positions. Missing values (timeouts)
//! take the remaining worst positions and share their mean, so with ten
//! methods one timeout ranks 10, two rank 9.5 each and three rank 9 each.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use subsel_core::Method;

use crate::error::{BenchError, Result};
use crate::record::{Metric, RunRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Maximize,
    Minimize,
}

impl Orientation {
    pub fn of(metric: Metric) -> Self {
        if metric.higher_is_better() {
            Orientation::Maximize
        } else {
            Orientation::Minimize
        }
    }
}

/// Ranks one row. `None` and NaN count as missing.
pub fn rank_row(values: &[Option<f64>], orientation: Orientation) -> Result<Vec<f64>> {
    let mut present: Vec<(usize, f64)> = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.filter(|x| !x.is_nan()).map(|x| (i, x)))
        .collect();
    if present.is_empty() {
        return Err(BenchError::Invalid("cannot rank a row where every value is missing".into()));
    }
    present.sort_by(|a, b| match orientation {
        Orientation::Maximize => b.1.total_cmp(&a.1),
        Orientation::Minimize => a.1.total_cmp(&b.1),
    });
    let n = values.len();
    let missing_rank = (present.len() + 1 + n) as f64 / 2.0;
    let mut ranks = vec![missing_rank; n];
    let mut start = 0;
    while start < present.len() {
        let mut end = start + 1;
        while end < present.len() && present[end].1 == present[start].1 {
            end += 1;
        }
        // Positions start+1 ..= end share their mean.
        let shared = (start + 1 + end) as f64 / 2.0;
        for &(i, _) in &present[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    Ok(ranks)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub metric: String,
    pub orientation: Orientation,
    pub datasets: Vec<String>,
    pub methods: Vec<String>,
    /// `values[row][column]`, rows are datasets and columns methods.
    pub values: Vec<Vec<Option<f64>>>,
    pub ranks: Vec<Vec<f64>>,
    pub average_rank: Vec<f64>,
}

pub fn rank_aggregate(
    metric: &str,
    orientation: Orientation,
    datasets: Vec<String>,
    methods: Vec<String>,
    values: Vec<Vec<Option<f64>>>,
) -> Result<RankTable> {
    if values.is_empty() || values.len() != datasets.len() {
        return Err(BenchError::Invalid("need one value row per dataset, and at least one".into()));
    }
    if values.iter().any(|row| row.len() != methods.len()) {
        return Err(BenchError::Invalid("every row needs one value per method".into()));
    }
    let ranks = values
        .iter()
        .zip(&datasets)
        .map(|(row, d)| {
            rank_row(row, orientation)
                .map_err(|_| BenchError::Invalid(format!("{metric}: every value of dataset '{d}' is missing")))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = ranks.len() as f64;
    let average_rank = (0..methods.len())
        .map(|c| ranks.iter().map(|r| r[c]).sum::<f64>() / rows)
        .collect();
    Ok(RankTable {
        metric: metric.to_string(),
        orientation,
        datasets,
        methods,
        values,
        ranks,
        average_rank,
    })
}

// Known methods in table order, then anything else alphabetically.
fn method_order(a: &str, b: &str) -> std::cmp::Ordering {
    let pos = |s: &str| Method::ALL.iter().position(|m| m.id() == s).unwrap_or(usize::MAX);
    pos(a).cmp(&pos(b)).then_with(|| a.cmp(b))
}

/// One table per metric from raw records. Repetitions of a cell are
/// averaged over the runs that finished; a cell is missing when none did.
/// Datasets with every method missing for a metric are left out of that
/// metric's table.
pub fn tables_from_records(records: &[RunRecord]) -> Result<Vec<RankTable>> {
    let mut datasets: Vec<String> = Vec::new();
    let mut methods: Vec<String> = Vec::new();
    for r in records {
        if !datasets.contains(&r.dataset) {
            datasets.push(r.dataset.clone());
        }
        if !methods.contains(&r.method) {
            methods.push(r.method.clone());
        }
    }
    methods.sort_by(|a, b| method_order(a, b));

    let mut tables = Vec::new();
    for metric in Metric::ALL {
        let mut sums: BTreeMap<(&str, &str), (f64, usize)> = BTreeMap::new();
        for r in records {
            let e = sums.entry((&r.dataset, &r.method)).or_insert((0.0, 0));
            if let Some(v) = r.metric(metric) {
                e.0 += v;
                e.1 += 1;
            }
        }
        let mut rows = Vec::new();
        let mut kept = Vec::new();
        for d in &datasets {
            let row: Vec<Option<f64>> = methods
                .iter()
                .map(|m| match sums.get(&(d.as_str(), m.as_str())) {
                    Some(&(s, c)) if c > 0 => Some(s / c as f64),
                    _ => None,
                })
                .collect();
            if row.iter().any(Option::is_some) {
                rows.push(row);
                kept.push(d.clone());
            }
        }
        if rows.is_empty() {
            continue;
        }
        tables.push(rank_aggregate(
            metric.name(),
            Orientation::of(metric),
            kept,
            methods.clone(),
            rows,
        )?);
    }
    Ok(tables)
}

/// Long-form CSV: one line per cell plus one `Avg Rank` line per method.
pub fn to_csv(tables: &[RankTable]) -> String {
    let mut out = String::from("metric,dataset,method,value,rank\n");
    for t in tables {
        for (d, dataset) in t.datasets.iter().enumerate() {
            for (c, method) in t.methods.iter().enumerate() {
                let value = t.values[d][c].map_or_else(|| "missing".to_string(), |v| format!("{v:e}"));
                let _ = writeln!(out, "{},{},{},{},{}", t.metric, dataset, method, value, t.ranks[d][c]);
            }
        }
        for (c, method) in t.methods.iter().enumerate() {
            let _ = writeln!(out, "{},Avg Rank,{},,{:.2}", t.metric, method, t.average_rank[c]);
        }
    }
    out
}
