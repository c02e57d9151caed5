//! Benchmark harness for subset selection: point-set files, suite
//! manifests, the cell runner, metric evaluation and rank tables. The
//! `subsel` binary is a thin wrapper around [`cli::run`].

pub mod cli;
pub mod error;
pub mod eval;
pub mod io;
pub mod manifest;
pub mod rank;
pub mod record;
pub mod runner;

pub use error::{BenchError, Result};
pub use manifest::SuiteManifest;
pub use rank::{rank_aggregate, rank_row, Orientation, RankTable};
pub use record::{Metric, Metrics, RunRecord};
