//! Multi-seed standard-vs-ACET experiments.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::acet::{self, Method, RunHistory, TrainConfig};
use crate::datasets::{load_mnist_idx, train_test_gen, Dataset, GeneratorSpec};
use crate::error::{Error, Result};
use crate::harness::aggregate::{aggregate, compare, Comparison, SeedOutcome, SummaryRow};
use crate::harness::checkpoint::save_model;
use crate::harness::report::{
    write_comparison_csv, write_history_csv, write_increments_csv, write_summary_csv,
};
use crate::nncore::{Mlp, RngState, Stream};

/// Where the samples come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetSpec {
    Synthetic {
        generator: GeneratorSpec,
        n_train: usize,
        n_test: usize,
    },
    Mnist {
        train_images: PathBuf,
        train_labels: PathBuf,
        test_images: PathBuf,
        test_labels: PathBuf,
        /// Keep only the first `n` training samples.
        #[serde(default)]
        limit_train: Option<usize>,
        #[serde(default)]
        limit_test: Option<usize>,
    },
}

impl DatasetSpec {
    pub fn n_features(&self) -> usize {
        match self {
            DatasetSpec::Synthetic { generator, .. } => generator.n_features(),
            DatasetSpec::Mnist { .. } => 784,
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            DatasetSpec::Synthetic { generator, .. } => generator.n_classes(),
            DatasetSpec::Mnist { .. } => 10,
        }
    }
}

/// One experiment: a dataset, an architecture, a shared training budget and
/// a seed list, run under each listed method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub dataset: DatasetSpec,
    /// Hidden-layer widths; input and output widths come from the dataset.
    pub hidden: Vec<usize>,
    #[serde(default = "both_methods")]
    pub methods: Vec<Method>,
    pub seeds: Vec<u64>,
    /// Shared by every method; the `method` field is overridden per run.
    pub train: TrainConfig,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub save_models: bool,
}

fn both_methods() -> Vec<Method> {
    vec![Method::Standard, Method::Acet]
}

impl ExperimentSpec {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        let spec: ExperimentSpec = serde_json::from_str(&text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn widths(&self) -> Vec<usize> {
        let mut w = vec![self.dataset.n_features()];
        w.extend_from_slice(&self.hidden);
        w.push(self.dataset.n_classes());
        w
    }

    /// The run configuration for `method`; everything but the method is shared.
    pub fn config_for(&self, method: Method, seed: u64) -> TrainConfig {
        TrainConfig {
            method,
            seed,
            label_smoothing_alpha: match method {
                Method::Standard => self.train.label_smoothing_alpha,
                Method::Acet => None,
            },
            ..self.train.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config(format!("{}: no seeds", self.name)));
        }
        if self.methods.is_empty() {
            return Err(Error::Config(format!("{}: no methods", self.name)));
        }
        if self.hidden.contains(&0) {
            return Err(Error::Config(format!("{}: zero-width hidden layer", self.name)));
        }
        if let DatasetSpec::Synthetic { generator, .. } = &self.dataset {
            generator.validate()?;
        }
        for &m in &self.methods {
            self.config_for(m, 0).validate()?;
        }
        Ok(())
    }

    /// Loads or generates the train/test pair for `seed`.
    pub fn datasets(&self, seed: u64) -> Result<(Dataset, Dataset)> {
        match &self.dataset {
            DatasetSpec::Synthetic {
                generator,
                n_train,
                n_test,
            } => train_test_gen(generator, *n_train, *n_test, seed),
            DatasetSpec::Mnist {
                train_images,
                train_labels,
                test_images,
                test_labels,
                limit_train,
                limit_test,
            } => {
                let mut train = load_mnist_idx(train_images, train_labels)?;
                let mut test = load_mnist_idx(test_images, test_labels)?;
                if let Some(n) = limit_train {
                    train = train.head(*n);
                }
                if let Some(n) = limit_test {
                    test = test.head(*n);
                }
                Ok((train, test))
            }
        }
    }

    /// The initial model every method starts from for `seed`.
    pub fn initial_model(&self, seed: u64) -> Result<Mlp> {
        Mlp::init(&self.widths(), &mut RngState::for_stream(seed, Stream::Init))
    }
}

#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed: u64,
    pub method: Method,
    pub history: RunHistory,
    pub model: Mlp,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub name: String,
    pub runs: Vec<SeedRun>,
    pub summary: Vec<SummaryRow>,
    pub comparison: Option<Comparison>,
}

impl ExperimentReport {
    pub fn outcomes(&self) -> Vec<SeedOutcome> {
        self.runs.iter().map(SeedRun::outcome).collect()
    }

    pub fn summary_for(&self, method: Method) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.method == method)
    }
}

impl SeedRun {
    pub fn outcome(&self) -> SeedOutcome {
        SeedOutcome {
            seed: self.seed,
            method: self.method,
            best_test_acc: self.history.best_test_acc,
            total_wall_seconds: self.history.total_wall_seconds,
        }
    }
}

pub fn history_file(dir: &Path, method: Method, seed: u64) -> PathBuf {
    dir.join(format!("{method}_seed{seed}.csv"))
}

pub fn model_file(dir: &Path, method: Method, seed: u64) -> PathBuf {
    dir.join(format!("{method}_seed{seed}.model"))
}

pub fn increments_file(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("increments_seed{seed}.csv"))
}

/// Trains every method on one seed from a shared initial model and
/// identical data.
pub fn run_seed(spec: &ExperimentSpec, seed: u64) -> Result<Vec<SeedRun>> {
    let (train, test) = spec.datasets(seed)?;
    let initial = spec.initial_model(seed)?;
    spec.methods
        .iter()
        .map(|&method| {
            let config = spec.config_for(method, seed);
            let mut rng = RngState::for_stream(seed, Stream::Shuffle);
            let (model, history) = acet::train(initial.clone(), &train, &test, &config, &mut rng)?;
            Ok(SeedRun {
                seed,
                method,
                history,
                model,
            })
        })
        .collect()
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    run_experiment_with(spec, |_| {})
}

/// Like [`run_experiment`], calling `observe` after each finished run.
pub fn run_experiment_with(
    spec: &ExperimentSpec,
    mut observe: impl FnMut(&SeedRun),
) -> Result<ExperimentReport> {
    spec.validate()?;
    let dir = &spec.output_dir;
    fs::create_dir_all(dir)?;

    let mut runs = Vec::with_capacity(spec.seeds.len() * spec.methods.len());
    for &seed in &spec.seeds {
        for run in run_seed(spec, seed)? {
            write_history_csv(&run.history, history_file(dir, run.method, seed))?;
            if run.method == Method::Acet {
                write_increments_csv(&run.history.increment_checks, increments_file(dir, seed))?;
            }
            if spec.save_models {
                save_model(&run.model, model_file(dir, run.method, seed))?;
            }
            observe(&run);
            runs.push(run);
        }
    }

    let outcomes: Vec<SeedOutcome> = runs.iter().map(SeedRun::outcome).collect();
    let summary = aggregate(&spec.name, &outcomes)?;
    let comparison = compare(&summary);
    write_summary_csv(&summary, dir.join("summary.csv"))?;
    if let Some(c) = &comparison {
        write_comparison_csv(std::slice::from_ref(c), dir.join("comparison.csv"))?;
    }
    Ok(ExperimentReport {
        name: spec.name.clone(),
        runs,
        summary,
        comparison,
    })
}
