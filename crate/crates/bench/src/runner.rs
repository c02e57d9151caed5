//! Executes suites: cells run concurrently on a fixed number of worker
//! threads while a single writer appends their records in completion order.

use std::collections::HashSet;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Duration;

use subsel_core::selectors::{select, CancelToken};
use subsel_core::{Method, SelectParams, SelectionResult, Seed};

use crate::error::Result;
use crate::eval::{evaluate, EvalConfig};
use crate::manifest::{LoadedDataset, SelectorConfig, SuiteManifest};
use crate::record::{Metrics, RecordWriter, RunRecord};

/// Runs one selection under `time_limit_secs` and evaluates the subset.
pub fn run_cell(
    dataset_id: &str,
    data: &LoadedDataset,
    method: Method,
    k: usize,
    params: &SelectParams,
    seed: Option<u64>,
    time_limit_secs: f64,
) -> Result<(RunRecord, SelectionResult)> {
    let cancel = CancelToken::with_limit(Duration::from_secs_f64(time_limit_secs.max(0.0)));
    let result = select(&data.points, k, method, params, seed.map(Seed), &cancel)?;
    let metrics = if result.timed_out {
        Metrics::default()
    } else {
        let subset = data.points.select(&result.indices);
        evaluate(
            &subset,
            EvalConfig {
                hv_reference: &data.hv_reference,
                reference_set: data.reference_set(),
            },
        )?
    };
    let record = RunRecord {
        dataset: dataset_id.to_string(),
        method: method.id().to_string(),
        seed,
        k,
        metrics,
        runtime_seconds: result.runtime_seconds,
        timed_out: result.timed_out,
        params: result.params.clone(),
    };
    Ok((record, result))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub completed: usize,
    pub timed_out: usize,
    pub skipped: usize,
}

impl Summary {
    /// True when cells ran and every one of them hit the time limit.
    pub fn timeout_only(&self) -> bool {
        self.timed_out > 0 && self.completed == 0
    }
}

struct Cell<'a> {
    selector: &'a SelectorConfig,
    method: Method,
    seed: u64,
}

/// Runs every pending cell of `manifest`, appending records to `out`.
///
/// Cells whose (dataset, method, seed) already appear in `out` are
/// skipped, so an interrupted run resumes where it stopped. Datasets are
/// processed one at a time so that only one candidate set is in memory.
pub fn run_suite(
    manifest: &SuiteManifest,
    base: &Path,
    out: &Path,
    workers: usize,
    mut progress: impl FnMut(&RunRecord),
) -> Result<Summary> {
    manifest.validate(base)?;
    let (mut writer, existing) = RecordWriter::open(out)?;
    let done: HashSet<_> = existing.iter().map(RunRecord::key).collect();
    let mut summary = Summary::default();
    let workers = workers.max(1);

    for dataset in &manifest.datasets {
        let mut cells = Vec::new();
        for selector in &manifest.selectors {
            let method = selector.method()?;
            for &seed in &selector.seeds {
                if done.contains(&(dataset.id.clone(), method.id().to_string(), Some(seed))) {
                    summary.skipped += 1;
                } else {
                    cells.push(Cell { selector, method, seed });
                }
            }
        }
        if cells.is_empty() {
            continue;
        }
        let data = dataset.load(base, &manifest.evaluation)?;
        let m = data.points.dim();
        let next = AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel::<Result<RunRecord>>();
        let mut failure = None;
        std::thread::scope(|scope| {
            for _ in 0..workers.min(cells.len()) {
                let tx = tx.clone();
                let (cells, next, data) = (&cells, &next, &data);
                scope.spawn(move || loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(cell) = cells.get(i) else { break };
                    let outcome = cell.selector.k_for(m).and_then(|k| {
                        run_cell(
                            &dataset.id,
                            data,
                            cell.method,
                            k,
                            &cell.selector.params.to_params(),
                            Some(cell.seed),
                            manifest.time_limit_secs,
                        )
                        .map(|(rec, _)| rec)
                    });
                    if tx.send(outcome).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            for outcome in rx {
                match outcome {
                    Ok(rec) => {
                        if let Err(e) = writer.append(&rec) {
                            failure.get_or_insert(e);
                            next.store(usize::MAX / 2, Ordering::Relaxed);
                            continue;
                        }
                        if rec.timed_out {
                            summary.timed_out += 1;
                        } else {
                            summary.completed += 1;
                        }
                        progress(&rec);
                    }
                    Err(e) => {
                        // Stop handing out new cells; let running ones finish
                        // so their records are kept.
                        failure.get_or_insert(e);
                        next.store(usize::MAX / 2, Ordering::Relaxed);
                    }
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(summary)
}
