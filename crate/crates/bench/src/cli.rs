use std::ffi::OsString;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use subsel_core::sampler::{generate_front, FrontSpec};
use subsel_core::selectors::reference_vectors::standard_k;
use subsel_core::{exec, ideal_nadir, nondominated_filter, reference_point, Method, PointSet, SelectParams, Seed};

use crate::error::{exit, BenchError, Result};
use crate::eval::{evaluate, EvalConfig};
use crate::io::{self, read_points, write_points};
use crate::manifest::{Dataset, DatasetSource, SuiteManifest};
use crate::rank::{tables_from_records, to_csv};
use crate::record::{read_records, Metrics, RunRecord};
use crate::runner::run_suite;

/// Environment variable consulted when `--workers` is not given.
pub const WORKERS_ENV: &str = "SUBSEL_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "subsel", version, about = "Subset selection benchmark harness")]
struct Cli {
    /// Worker threads (concurrent cells for `bench`, data-parallel threads
    /// everywhere).
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Fixed reduction order for floating-point sums.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Bin,
}

impl From<FormatArg> for io::Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => io::Format::Csv,
            FormatArg::Bin => io::Format::Bin,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a front, or every set of a preset suite into a directory.
    Generate {
        #[arg(long, required_unless_present = "preset")]
        kind: Option<String>,
        #[arg(long, short = 'm', required_unless_present = "preset")]
        m: Option<usize>,
        #[arg(long, short = 'n', required_unless_present = "preset")]
        n: Option<usize>,
        #[arg(long, conflicts_with_all = ["kind", "m", "n"])]
        preset: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Convert an external archive to the standard format.
    Ingest {
        input: PathBuf,
        /// Keep only non-dominated rows.
        #[arg(long)]
        filter: bool,
        /// Negate every objective (for maximization problems).
        #[arg(long)]
        maximize: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run one selector on a point file and write the selected points.
    Select {
        dataset: PathBuf,
        #[arg(long)]
        method: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = crate::manifest::DEFAULT_TIME_LIMIT_SECS)]
        time_limit_secs: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a subset file and print its run record.
    Evaluate {
        subset: PathBuf,
        /// Reference set for IGD, IGD+ and epsilon.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// True-front nadir; the hypervolume reference is 1.2 times it.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nadir: Option<Vec<f64>>,
        /// Explicit hypervolume reference point.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        ref_point: Option<Vec<f64>>,
        /// Append the record to this JSONL file instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a whole suite from a manifest file or a preset.
    Bench {
        #[arg(required_unless_present = "preset")]
        manifest: Option<PathBuf>,
        #[arg(long, conflicts_with = "manifest")]
        preset: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides the manifest's time limit.
        #[arg(long)]
        time_limit_secs: Option<f64>,
        /// Results file (JSONL); existing cells are skipped.
        #[arg(long)]
        out: PathBuf,
    },
    /// Tie-averaged rank tables from result files, as CSV.
    Rank {
        #[arg(required = true)]
        results: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Metadata written next to a generated point file as `<file>.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub id: String,
    pub kind: Option<String>,
    pub m: usize,
    pub n: usize,
    pub seed: Option<u64>,
    pub true_nadir: Option<Vec<f64>>,
}

/// Metadata written next to a selected subset as `<file>.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsetMeta {
    pub dataset: String,
    pub method: String,
    pub k: usize,
    pub seed: Option<u64>,
    pub indices: Vec<usize>,
    pub runtime_seconds: f64,
    pub timed_out: bool,
    pub params: std::collections::BTreeMap<String, String>,
}

pub fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("metadata always serializes");
    std::fs::write(path, text + "\n").map_err(|e| BenchError::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Option<T>> {
    if !path.is_file() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    serde_json::from_str(&text).map(Some).map_err(|e| BenchError::Json {
        path: path.to_path_buf(),
        source: e,
    })
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned())
}

fn print_line(line: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").map_err(|e| BenchError::io("<stdout>", e))
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    exec::set_deterministic(cli.deterministic);
    let workers = cli
        .workers
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    // Fails only if a pool already exists (repeated in-process calls).
    let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();

    match dispatch(cli.command, workers) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, workers: usize) -> Result<i32> {
    match command {
        Command::Generate {
            kind,
            m,
            n,
            preset,
            seed,
            output,
        } => {
            if let Some(name) = preset {
                generate_preset(&name, seed, &output)?;
            } else {
                let (kind, m, n) = (kind.expect("required"), m.expect("required"), n.expect("required"));
                let spec = FrontSpec {
                    kind: kind.parse()?,
                    m,
                    n,
                    seed: Seed(seed),
                };
                generate_one(&spec, &stem(&output.out), &output.out, output.format.into())?;
            }
            Ok(exit::SUCCESS)
        }
        Command::Ingest {
            input,
            filter,
            maximize,
            output,
        } => {
            let mut points = read_points(&input)?;
            if maximize {
                points = PointSet::new(points.dim(), points.as_flat().iter().map(|v| -v).collect())?;
            }
            if filter {
                let before = points.len();
                points = nondominated_filter(&points);
                eprintln!("kept {} of {before} points", points.len());
            }
            write_points(&output.out, &points, output.format.into())?;
            Ok(exit::SUCCESS)
        }
        Command::Select {
            dataset,
            method,
            k,
            seed,
            time_limit_secs,
            output,
        } => select_cmd(&dataset, &method, k, seed, time_limit_secs, &output),
        Command::Evaluate {
            subset,
            reference,
            nadir,
            ref_point,
            out,
        } => evaluate_cmd(&subset, reference.as_deref(), nadir, ref_point, out.as_deref()),
        Command::Bench {
            manifest,
            preset,
            seed,
            time_limit_secs,
            out,
        } => {
            let (mut suite, base) = match (manifest, preset) {
                (Some(path), _) => {
                    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                    (SuiteManifest::from_path(&path)?, base)
                }
                (None, Some(name)) => (SuiteManifest::preset(&name, seed)?, PathBuf::from(".")),
                (None, None) => unreachable!("clap requires one"),
            };
            if let Some(t) = time_limit_secs {
                suite.time_limit_secs = t;
            }
            eprintln!("running {} on {workers} worker(s)", suite.suite);
            let summary = run_suite(&suite, &base, &out, workers, |r| {
                let status = if r.timed_out {
                    "timed out".to_string()
                } else {
                    format!("{:.3}s", r.runtime_seconds)
                };
                eprintln!("{} {} seed={:?}: {status}", r.dataset, r.method, r.seed);
            })?;
            eprintln!(
                "{} completed, {} timed out, {} already present",
                summary.completed, summary.timed_out, summary.skipped
            );
            Ok(if summary.timeout_only() { exit::TIMED_OUT } else { exit::SUCCESS })
        }
        Command::Rank { results, out } => {
            let mut records = Vec::new();
            for path in &results {
                records.extend(read_records(path)?);
            }
            let csv = to_csv(&tables_from_records(&records)?);
            match out {
                Some(path) => std::fs::write(&path, csv).map_err(|e| BenchError::io(&path, e))?,
                None => print!("{csv}"),
            }
            Ok(exit::SUCCESS)
        }
    }
}

fn generate_one(spec: &FrontSpec, id: &str, out: &Path, format: io::Format) -> Result<()> {
    let points = generate_front(spec)?;
    write_points(out, &points, format)?;
    write_json(
        &sidecar(out),
        &DatasetMeta {
            id: id.to_string(),
            kind: Some(spec.kind.name().to_string()),
            m: spec.m,
            n: spec.n,
            seed: Some(spec.seed.0),
            true_nadir: Some(spec.kind.true_nadir(spec.m)),
        },
    )
}

// Writes every set of the preset plus a manifest that refers to the files.
fn generate_preset(name: &str, seed: u64, output: &OutputArgs) -> Result<()> {
    let mut suite = SuiteManifest::preset(name, seed)?;
    let dir = &output.out;
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let ext = match output.format {
        FormatArg::Csv => "csv",
        FormatArg::Bin => "bin",
    };
    let mut files = Vec::new();
    for d in &suite.datasets {
        let spec = d.front_spec()?.expect("presets are generated");
        let file = PathBuf::from(format!("{}.{ext}", d.id));
        eprintln!("writing {}", dir.join(&file).display());
        generate_one(&spec, &d.id, &dir.join(&file), output.format.into())?;
        files.push(Dataset {
            id: d.id.clone(),
            source: DatasetSource::File {
                path: file.clone(),
                reference: Some(file),
                true_nadir: Some(spec.kind.true_nadir(spec.m)),
            },
        });
    }
    suite.datasets = files;
    let path = dir.join("manifest.json");
    std::fs::write(&path, suite.to_json() + "\n").map_err(|e| BenchError::io(&path, e))
}

fn select_cmd(
    dataset: &Path,
    method: &str,
    k: Option<usize>,
    seed: Option<u64>,
    time_limit_secs: f64,
    output: &OutputArgs,
) -> Result<i32> {
    let method: Method = method.parse()?;
    if !(time_limit_secs >= 0.0) {
        return Err(BenchError::Invalid("--time-limit-secs must be nonnegative".into()));
    }
    let points = read_points(dataset)?;
    let meta: Option<DatasetMeta> = read_json(&sidecar(dataset))?;
    let id = meta.map_or_else(|| stem(dataset), |m| m.id);
    let k = match k.or_else(|| standard_k(points.dim())) {
        Some(k) => k,
        None => {
            return Err(BenchError::Invalid(format!(
                "no standard subset size for {} objectives; pass --k",
                points.dim()
            )))
        }
    };
    let seed = seed.or(method.is_randomized().then_some(0));
    let cancel = subsel_core::selectors::CancelToken::with_limit(std::time::Duration::from_secs_f64(time_limit_secs));
    let result = subsel_core::selectors::select(&points, k, method, &SelectParams::default(), seed.map(Seed), &cancel)?;
    let record = RunRecord {
        dataset: id.clone(),
        method: method.id().to_string(),
        seed,
        k,
        metrics: Metrics::default(),
        runtime_seconds: result.runtime_seconds,
        timed_out: result.timed_out,
        params: result.params.clone(),
    };
    if !result.timed_out {
        write_points(&output.out, &points.select(&result.indices), output.format.into())?;
        write_json(
            &sidecar(&output.out),
            &SubsetMeta {
                dataset: id,
                method: method.id().to_string(),
                k,
                seed,
                indices: result.indices.clone(),
                runtime_seconds: result.runtime_seconds,
                timed_out: false,
                params: result.params.clone(),
            },
        )?;
    }
    print_line(&record.to_line())?;
    Ok(if result.timed_out { exit::TIMED_OUT } else { exit::SUCCESS })
}

fn evaluate_cmd(
    subset_path: &Path,
    reference: Option<&Path>,
    nadir: Option<Vec<f64>>,
    ref_point: Option<Vec<f64>>,
    out: Option<&Path>,
) -> Result<i32> {
    let subset = read_points(subset_path)?;
    let reference_set = reference.map(read_points).transpose()?;
    let meta: Option<SubsetMeta> = read_json(&sidecar(subset_path))?;
    let m = subset.dim();
    let hv_reference = match (ref_point, nadir) {
        (Some(r), _) => r,
        (None, Some(n)) => reference_point(&n, subsel_core::point::REFERENCE_FACTOR)?,
        (None, None) => {
            let ref_meta: Option<DatasetMeta> = match reference {
                Some(r) => read_json(&sidecar(r))?,
                None => None,
            };
            let nadir = match (ref_meta.and_then(|d| d.true_nadir), &reference_set) {
                (Some(n), _) => n,
                (None, Some(r)) => ideal_nadir(r)?.1,
                (None, None) => {
                    return Err(BenchError::Invalid(
                        "need --ref-point, --nadir or --reference to place the hypervolume reference point".into(),
                    ))
                }
            };
            reference_point(&nadir, subsel_core::point::REFERENCE_FACTOR)?
        }
    };
    if hv_reference.len() != m {
        return Err(subsel_core::Error::DimensionMismatch {
            expected: m,
            found: hv_reference.len(),
        }
        .into());
    }
    let metrics = evaluate(
        &subset,
        EvalConfig {
            hv_reference: &hv_reference,
            reference_set: reference_set.as_ref(),
        },
    )?;
    let record = match meta {
        Some(s) => RunRecord {
            dataset: s.dataset,
            method: s.method,
            seed: s.seed,
            k: s.k,
            metrics,
            runtime_seconds: s.runtime_seconds,
            timed_out: s.timed_out,
            params: s.params,
        },
        None => RunRecord {
            dataset: stem(subset_path),
            method: "unknown".into(),
            seed: None,
            k: subset.len(),
            metrics,
            runtime_seconds: 0.0,
            timed_out: false,
            params: Default::default(),
        },
    };
    match out {
        Some(path) => {
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| BenchError::io(path, e))?;
            writeln!(f, "{}", record.to_line()).map_err(|e| BenchError::io(path, e))?;
        }
        None => print_line(&record.to_line())?,
    }
    Ok(exit::SUCCESS)
}
