//! `domgeo` — compute nearest dominating points, generate datasets, and
//! benchmark the algorithms against each other.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O or
//! parse error.

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use domgeo::dataset::{gen_dataset, parse_dataset, write_dataset, Distribution};
use domgeo::engine::{
    nearest_dominator_offline_with_stats, nearest_dominator_rangetree_with_stats,
    nearest_dominator_sweep_with_stats, DominatorResult, RunStats,
};
use domgeo::geometry::Dataset;
use domgeo::oracle::brute_nearest_dominator;
use domgeo::Error as DomainError;

#[derive(Parser)]
#[command(name = "domgeo", version, about = "Nearest dominating point queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a dataset: for every point, report the closest point whose
    /// rating strictly dominates it.
    Solve {
        /// Algorithm to run.
        #[arg(long, value_enum)]
        algo: Algo,
        /// Input dataset file.
        #[arg(long)]
        input: PathBuf,
        /// Output file (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Re-run the brute-force reference and fail on any difference.
        #[arg(long)]
        verify: bool,
    },
    /// Generate a dataset file deterministically from a seed.
    Gen {
        /// Number of points.
        #[arg(long)]
        n: usize,
        /// Location dimension (1 or 2).
        #[arg(long, default_value_t = 1)]
        d_real: usize,
        /// Rating dimension.
        #[arg(long, default_value_t = 2)]
        d_feat: usize,
        /// Seed; the same seed always reproduces the same file.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point distribution: uniform, correlated, anti-chain, or grid.
        #[arg(long, default_value = "uniform")]
        dist: String,
        /// Output file (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time algorithms across sizes and seeds, writing one CSV row per
    /// (algorithm, n, seed) with wall time and exact work counters.
    Bench {
        /// Comma-separated algorithms.
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        algos: Vec<Algo>,
        /// Comma-separated point counts.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
        /// CSV output path.
        #[arg(long)]
        csv: PathBuf,
        /// Location dimension for generated instances.
        #[arg(long, default_value_t = 1)]
        d_real: usize,
        /// Rating dimension for generated instances.
        #[arg(long, default_value_t = 2)]
        d_feat: usize,
        /// Distribution for generated instances.
        #[arg(long, default_value = "uniform")]
        dist: String,
        /// Repetitions per cell; the fastest wall time is reported.
        #[arg(long, default_value_t = 1)]
        reps: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Brute,
    Sweep,
    Rangetree,
    Offline,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Brute => "brute",
            Algo::Sweep => "sweep",
            Algo::Rangetree => "rangetree",
            Algo::Offline => "offline",
        })
    }
}

enum CliError {
    Io(PathBuf, std::io::Error),
    Domain(DomainError),
    Usage(String),
    Verify { index: usize },
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::Domain(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Verify { index } => {
                write!(f, "verification failed: point {index} differs from the reference answer")
            }
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify { .. } => 1,
            CliError::Io(..) | CliError::Domain(DomainError::Parse { .. }) => 3,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = configure_threads().and_then(|()| match cli.cmd {
        Cmd::Solve {
            algo,
            input,
            output,
            verify,
        } => run_solve(algo, &input, output.as_deref(), verify),
        Cmd::Gen {
            n,
            d_real,
            d_feat,
            seed,
            dist,
            output,
        } => run_gen(n, d_real, d_feat, seed, &dist, output.as_deref()),
        Cmd::Bench {
            algos,
            sizes,
            seeds,
            csv,
            d_real,
            d_feat,
            dist,
            reps,
        } => run_bench(&algos, &sizes, &seeds, &csv, d_real, d_feat, &dist, reps),
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Applies `DOMGEO_THREADS`. Single-threaded builds accept only 1; builds
/// with the `parallel` feature size the worker pool accordingly (default 1,
/// which keeps runs and timings deterministic).
fn configure_threads() -> Result<(), CliError> {
    let threads = match std::env::var("DOMGEO_THREADS") {
        Err(std::env::VarError::NotPresent) => 1,
        Err(e) => return Err(CliError::Usage(format!("DOMGEO_THREADS: {e}"))),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "DOMGEO_THREADS must be a positive integer, got {s:?}"
                ))
            })?,
    };
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool setup failed: {e}")))
    }
    #[cfg(not(feature = "parallel"))]
    {
        if threads != 1 {
            return Err(CliError::Usage(
                "this build is single-threaded; DOMGEO_THREADS must be 1".into(),
            ));
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.to_owned(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve_with(algo: Algo, ds: &Dataset) -> Result<(DominatorResult, RunStats), CliError> {
    Ok(match algo {
        Algo::Brute => {
            let res = brute_nearest_dominator(ds);
            let n = ds.len();
            // The reference scan examines every other point once per point.
            let stats = RunStats {
                n,
                queries: n as u64,
                node_visits: (n as u64) * (n as u64 - 1),
                built_points: 0,
                indexes_built: 0,
            };
            (res, stats)
        }
        Algo::Sweep => nearest_dominator_sweep_with_stats(ds)?,
        Algo::Rangetree => nearest_dominator_rangetree_with_stats(ds)?,
        Algo::Offline => nearest_dominator_offline_with_stats(ds)?,
    })
}

/// One line per point: `i j sqdist`, or `i - -` when nothing dominates
/// point `i`. Distances are printed in the shortest form that parses back
/// to the identical 64-bit float.
fn format_matches(result: &DominatorResult) -> String {
    let mut out = String::new();
    for (i, m) in result.matches().iter().enumerate() {
        let _ = match m {
            Some(m) => writeln!(out, "{i} {} {}", m.dominator, m.sqdist),
            None => writeln!(out, "{i} - -"),
        };
    }
    out
}

fn run_solve(
    algo: Algo,
    input: &Path,
    output: Option<&Path>,
    verify: bool,
) -> Result<(), CliError> {
    let ds = parse_dataset(&read_file(input)?)?;
    let (result, _) = solve_with(algo, &ds)?;
    emit(output, &format_matches(&result))?;
    if verify && algo != Algo::Brute {
        let reference = brute_nearest_dominator(&ds);
        if let Some(index) = result
            .matches()
            .iter()
            .zip(reference.matches())
            .position(|(a, b)| a != b)
        {
            return Err(CliError::Verify { index });
        }
    }
    Ok(())
}

fn run_gen(
    n: usize,
    d_real: usize,
    d_feat: usize,
    seed: u64,
    dist: &str,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let dist: Distribution = dist.parse()?;
    let ds = gen_dataset(n, d_real, d_feat, seed, dist)?;
    emit(output, &write_dataset(&ds))
}

#[allow(clippy::too_many_arguments)]
fn run_bench(
    algos: &[Algo],
    sizes: &[usize],
    seeds: &[u64],
    csv: &Path,
    d_real: usize,
    d_feat: usize,
    dist: &str,
    reps: u32,
) -> Result<(), CliError> {
    if reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let dist: Distribution = dist.parse()?;
    let mut rows = String::from(
        "algorithm,n,d_real,d_feat,seed,wall_ns,node_visits,indexes_built,indexed_points\n",
    );
    for &n in sizes {
        for &seed in seeds {
            let ds = gen_dataset(n, d_real, d_feat, seed, dist)?;
            for &algo in algos {
                let mut best: Option<(u128, RunStats)> = None;
                for _ in 0..reps {
                    let start = Instant::now();
                    let (result, stats) = solve_with(algo, &ds)?;
                    let wall = start.elapsed().as_nanos();
                    drop(result);
                    if best.is_none_or(|(w, _)| wall < w) {
                        best = Some((wall, stats));
                    }
                }
                let (wall, stats) = best.expect("reps >= 1");
                let _ = writeln!(
                    rows,
                    "{algo},{n},{d_real},{d_feat},{seed},{wall},{},{},{}",
                    stats.node_visits, stats.indexes_built, stats.built_points
                );
            }
        }
    }
    fs::write(csv, rows).map_err(|e| CliError::Io(csv.to_owned(), e))
}
