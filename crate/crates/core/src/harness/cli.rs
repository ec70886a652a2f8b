//! The `acet` command line: `run`, `bench`, `grid` and `verify`.
//!
//! Exit codes: 0 on success, 1 when a run fails (including missing data
//! files), 2 for usage errors and unreadable or invalid configs.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::acet::Method;
use crate::datasets::mnist::{TEST_IMAGES, TEST_LABELS, TRAIN_IMAGES, TRAIN_LABELS};
use crate::error::{Error, Result};
use crate::harness::bench::{mnist_spec, run_bench, synthetic_spec, synthetic_specs, SYNTHETIC_BENCHMARKS};
use crate::harness::checkpoint::load_model;
use crate::harness::experiment::{run_experiment_with, DatasetSpec, ExperimentReport, ExperimentSpec, SeedRun};
use crate::harness::grid::{decision_grid, write_grid_csv};
use crate::harness::verify::run_verify;

#[derive(Debug, Parser)]
#[command(name = "acet", version, about = "Progressive-target training experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment from a JSON config or a built-in benchmark.
    Run(RunArgs),
    /// Run the four synthetic benchmarks, plus MNIST with --mnist.
    Bench(BenchArgs),
    /// Export a decision-boundary grid from a saved 2-D model.
    Grid(GridArgs),
    /// Run the invariant and gradient-check suite.
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    St,
    Acet,
    Both,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::St => vec![Method::Standard],
            MethodArg::Acet => vec![Method::Acet],
            MethodArg::Both => vec![Method::Standard, Method::Acet],
        }
    }
}

#[derive(Debug, Args)]
struct Overrides {
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Run seeds 0..N.
    #[arg(long, value_name = "N", conflicts_with = "seed")]
    seeds: Option<u64>,
    /// Run this single seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, value_name = "F")]
    eps: Option<f64>,
    #[arg(long, value_name = "F")]
    dt: Option<f64>,
    /// Epochs per increment.
    #[arg(long, value_name = "N")]
    epi: Option<usize>,
    #[arg(long, value_name = "N")]
    max_epochs: Option<usize>,
    #[arg(long, value_name = "F")]
    lr: Option<f64>,
    #[arg(long, value_name = "N")]
    batch: Option<usize>,
    /// Early-stopping patience in epochs; 0 disables it.
    #[arg(long, value_name = "N")]
    patience: Option<usize>,
    /// Record zero wall time so repeated runs write identical files.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    save_models: bool,
}

impl Overrides {
    fn apply(&self, spec: &mut ExperimentSpec) {
        if let Some(m) = self.method {
            spec.methods = m.methods();
        }
        if let Some(n) = self.seeds {
            spec.seeds = (0..n).collect();
        }
        if let Some(s) = self.seed {
            spec.seeds = vec![s];
        }
        let t = &mut spec.train;
        if let Some(v) = self.eps {
            t.epsilon = v;
        }
        if let Some(v) = self.dt {
            t.dt = v;
        }
        if let Some(v) = self.epi {
            t.epochs_per_increment = v;
        }
        if let Some(v) = self.max_epochs {
            t.max_epochs = v;
        }
        if let Some(v) = self.lr {
            t.lr = v;
        }
        if let Some(v) = self.batch {
            t.batch_size = v;
        }
        if let Some(p) = self.patience {
            t.early_stopping_patience = (p > 0).then_some(p);
        }
        if self.no_timing {
            t.record_wall_time = false;
        }
        if self.save_models {
            spec.save_models = true;
        }
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_name = "PATH", required_unless_present = "dataset")]
    config: Option<PathBuf>,
    /// A built-in benchmark name instead of a config file.
    #[arg(long, value_name = "NAME", conflicts_with = "config")]
    dataset: Option<String>,
    /// Output directory; defaults to the config's.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(flatten)]
    mnist: MnistPaths,
}

#[derive(Debug, Args)]
struct MnistPaths {
    /// Training images (IDX); test files default to the t10k names beside it.
    #[arg(long, value_name = "PATH")]
    mnist_images: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    mnist_labels: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    mnist_test_images: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    mnist_test_labels: Option<PathBuf>,
    /// Directory holding the four standard IDX files.
    #[arg(long, value_name = "DIR")]
    mnist_dir: Option<PathBuf>,
}

impl MnistPaths {
    fn given(&self) -> bool {
        self.mnist_images.is_some() || self.mnist_labels.is_some() || self.mnist_dir.is_some()
    }

    fn spec(&self, out_root: &Path) -> ExperimentSpec {
        let dir = self.mnist_dir.clone().unwrap_or_else(|| PathBuf::from("data/mnist"));
        let train_images = self.mnist_images.clone().unwrap_or_else(|| dir.join(TRAIN_IMAGES));
        let train_labels = self.mnist_labels.clone().unwrap_or_else(|| dir.join(TRAIN_LABELS));
        let test_dir = match &self.mnist_images {
            Some(p) => p.parent().map(Path::to_path_buf).unwrap_or_default(),
            None => dir,
        };
        let test_images = self.mnist_test_images.clone().unwrap_or_else(|| test_dir.join(TEST_IMAGES));
        let test_labels = self.mnist_test_labels.clone().unwrap_or_else(|| test_dir.join(TEST_LABELS));
        mnist_spec([train_images, train_labels], [test_images, test_labels], out_root)
    }
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_name = "DIR", default_value = "results")]
    out: PathBuf,
    /// Only this benchmark.
    #[arg(long, value_name = "NAME")]
    dataset: Option<String>,
    /// Also run MNIST; needs the IDX files.
    #[arg(long)]
    mnist: bool,
    #[command(flatten)]
    overrides: Overrides,
    #[command(flatten)]
    mnist_paths: MnistPaths,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Checkpoint written by `run --save-models`.
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    /// x_lo,x_hi,y_lo,y_hi
    #[arg(long, value_name = "X0,X1,Y0,Y1", default_value = "-2,2,-2,2", value_delimiter = ',', allow_hyphen_values = true)]
    bounds: Vec<f64>,
    #[arg(long, value_name = "N", default_value_t = 200)]
    resolution: usize,
    #[arg(long, value_name = "PATH", default_value = "grid.csv")]
    out: PathBuf,
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Verify => cmd_verify(),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("acet: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("acet: {}", describe(&e));
            1
        }
        Err(Failure::Checks) => 1,
    }
}

enum Failure {
    Usage(String),
    Runtime(Error),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn describe(e: &Error) -> String {
    match e {
        Error::NotFound(p) => format!("file not found: {}", p.display()),
        other => other.to_string(),
    }
}

fn load_spec(args: &RunArgs) -> std::result::Result<ExperimentSpec, Failure> {
    let mut spec = if let Some(path) = &args.config {
        ExperimentSpec::from_json_file(path)
            .map_err(|e| Failure::Usage(format!("cannot use config {}: {}", path.display(), describe(&e))))?
    } else {
        let name = args.dataset.as_deref().expect("clap requires --config or --dataset");
        let root = args.out.clone().unwrap_or_else(|| PathBuf::from("results"));
        if name == "mnist" {
            args.mnist.spec(&root)
        } else {
            synthetic_spec(name, &root).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown dataset {name:?}; expected one of {}, mnist",
                    SYNTHETIC_BENCHMARKS.join(", ")
                ))
            })?
        }
    };
    if args.config.is_some() {
        if let Some(out) = &args.out {
            spec.output_dir = out.clone();
        }
    }
    args.overrides.apply(&mut spec);
    spec.validate().map_err(|e| Failure::Usage(describe(&e)))?;
    Ok(spec)
}

fn print_run(spec_name: &str, run: &SeedRun) {
    let h = &run.history;
    println!(
        "{spec_name} {} seed {}: best acc {:.4}, {} epochs, {:.3} s, {} updates, {} skipped",
        run.method,
        run.seed,
        h.best_test_acc,
        h.epochs(),
        h.total_wall_seconds,
        h.total_updates(),
        h.total_skipped()
    );
    let _ = std::io::stdout().flush();
}

fn print_report(r: &ExperimentReport) {
    for row in &r.summary {
        println!(
            "{} {}: mean acc {:.4} ± {:.4}, mean time {:.3} s over {} seeds",
            row.dataset, row.method, row.mean_acc, row.std_acc, row.mean_time_s, row.seeds
        );
    }
    if let Some(c) = &r.comparison {
        println!(
            "{}: acet - st = {:+.2} points, time ratio {:.3}",
            c.dataset,
            100.0 * c.acc_delta,
            c.time_ratio
        );
    }
}

fn cmd_run(args: RunArgs) -> std::result::Result<(), Failure> {
    let spec = load_spec(&args)?;
    let report = run_experiment_with(&spec, |run| print_run(&spec.name, run))?;
    print_report(&report);
    println!("wrote {}", spec.output_dir.display());
    Ok(())
}

fn require_files(spec: &ExperimentSpec) -> Result<()> {
    if let DatasetSpec::Mnist {
        train_images,
        train_labels,
        test_images,
        test_labels,
        ..
    } = &spec.dataset
    {
        for p in [train_images, train_labels, test_images, test_labels] {
            if !p.is_file() {
                return Err(Error::NotFound(p.clone()));
            }
        }
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> std::result::Result<(), Failure> {
    let mut specs = match &args.dataset {
        Some(name) => vec![synthetic_spec(name, &args.out)
            .ok_or_else(|| Failure::Usage(format!("unknown benchmark {name:?}")))?],
        None => synthetic_specs(&args.out),
    };
    if args.mnist || args.mnist_paths.given() {
        let spec = args.mnist_paths.spec(&args.out);
        // Fail before spending minutes on the synthetic runs.
        require_files(&spec)?;
        specs.push(spec);
    }
    for spec in &mut specs {
        args.overrides.apply(spec);
        spec.validate().map_err(|e| Failure::Usage(describe(&e)))?;
    }
    let reports = run_bench(&specs, &args.out, |spec, run| print_run(&spec.name, run))?;
    for r in &reports {
        print_report(r);
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_grid(args: GridArgs) -> std::result::Result<(), Failure> {
    let b = &args.bounds;
    if b.len() != 4 || b[0] >= b[1] || b[2] >= b[3] {
        return Err(Failure::Usage(format!("--bounds needs x_lo,x_hi,y_lo,y_hi with lo < hi, got {b:?}")));
    }
    let model = load_model(&args.model)?;
    let points = decision_grid(&model, [[b[0], b[1]], [b[2], b[3]]], args.resolution)?;
    write_grid_csv(&points, &args.out)?;
    println!("wrote {} points to {}", points.len(), args.out.display());
    Ok(())
}

fn cmd_verify() -> std::result::Result<(), Failure> {
    let report = run_verify()?;
    for c in &report.checks {
        println!("{c}");
    }
    println!("max gradient-check relative error: {:.3e}", report.max_grad_err);
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
