//! The checked-in benchmark experiments.
//!
//! Noise levels were tuned once so standard training lands near the
//! reference baselines, then frozen; `configs/*.json` mirror these values.

use std::path::{Path, PathBuf};

use crate::acet::{Method, TrainConfig};
use crate::datasets::mnist::{TEST_IMAGES, TEST_LABELS, TRAIN_IMAGES, TRAIN_LABELS};
use crate::datasets::GeneratorSpec;
use crate::error::Result;
use crate::harness::aggregate::Comparison;
use crate::harness::experiment::{run_experiment_with, DatasetSpec, ExperimentReport, ExperimentSpec, SeedRun};
use crate::harness::report::write_comparison_csv;

pub const SYNTHETIC_BENCHMARKS: [&str; 4] = ["spiral", "complex_moons", "noisy_circles", "interlocking_rings"];

/// Training settings shared by the synthetic benchmarks.
pub fn synthetic_train_config() -> TrainConfig {
    TrainConfig {
        method: Method::Acet,
        epsilon: 1e-5,
        dt: 0.1,
        epochs_per_increment: 5,
        max_epochs: 300,
        batch_size: 32,
        lr: 3e-3,
        lr_decay: None,
        seed: 0,
        early_stopping_patience: Some(20),
        label_smoothing_alpha: None,
        record_wall_time: true,
    }
}

pub fn default_seeds() -> Vec<u64> {
    (0..10).collect()
}

/// A synthetic benchmark by name, writing under `out_root/<name>`.
pub fn synthetic_spec(name: &str, out_root: &Path) -> Option<ExperimentSpec> {
    let (generator, n, hidden) = match name {
        "spiral" => (GeneratorSpec::Spiral { noise_std: 0.65 }, 300, vec![100, 100]),
        "complex_moons" => (
            GeneratorSpec::ComplexMoons {
                noise_std: 0.2,
                warp: 0.3,
            },
            400,
            vec![100, 100],
        ),
        "noisy_circles" => (
            GeneratorSpec::NoisyCircles {
                noise_std: 0.45,
                factor: 0.5,
            },
            400,
            vec![100, 100],
        ),
        "interlocking_rings" => (
            GeneratorSpec::InterlockingRings { noise_std: 0.21 },
            600,
            vec![128, 128, 64],
        ),
        _ => return None,
    };
    Some(ExperimentSpec {
        name: name.to_string(),
        dataset: DatasetSpec::Synthetic {
            generator,
            n_train: n,
            n_test: n,
        },
        hidden,
        methods: vec![Method::Standard, Method::Acet],
        seeds: default_seeds(),
        train: synthetic_train_config(),
        output_dir: out_root.join(name),
        save_models: false,
    })
}

pub fn synthetic_specs(out_root: &Path) -> Vec<ExperimentSpec> {
    SYNTHETIC_BENCHMARKS
        .iter()
        .map(|n| synthetic_spec(n, out_root).expect("known benchmark"))
        .collect()
}

/// The MNIST benchmark reading the standard IDX file names from `dir`.
pub fn mnist_spec_in(dir: &Path, out_root: &Path) -> ExperimentSpec {
    mnist_spec(
        [dir.join(TRAIN_IMAGES), dir.join(TRAIN_LABELS)],
        [dir.join(TEST_IMAGES), dir.join(TEST_LABELS)],
        out_root,
    )
}

/// MLP 784-256-128-10, 20 epochs. One epoch per increment keeps the whole
/// ramp inside the budget with ten epochs to spare at t = 1.
pub fn mnist_spec(train: [PathBuf; 2], test: [PathBuf; 2], out_root: &Path) -> ExperimentSpec {
    let [train_images, train_labels] = train;
    let [test_images, test_labels] = test;
    ExperimentSpec {
        name: "mnist".into(),
        dataset: DatasetSpec::Mnist {
            train_images,
            train_labels,
            test_images,
            test_labels,
            limit_train: None,
            limit_test: None,
        },
        hidden: vec![256, 128],
        methods: vec![Method::Standard, Method::Acet],
        seeds: vec![0],
        train: TrainConfig {
            epochs_per_increment: 1,
            max_epochs: 20,
            batch_size: 64,
            lr: 1e-3,
            early_stopping_patience: None,
            ..synthetic_train_config()
        },
        output_dir: out_root.join("mnist"),
        save_models: false,
    }
}

/// Runs each spec in turn and writes `comparison.csv` for all of them under `out_root`.
pub fn run_bench(
    specs: &[ExperimentSpec],
    out_root: &Path,
    mut observe: impl FnMut(&ExperimentSpec, &SeedRun),
) -> Result<Vec<ExperimentReport>> {
    let mut reports = Vec::with_capacity(specs.len());
    for spec in specs {
        reports.push(run_experiment_with(spec, |run| observe(spec, run))?);
    }
    let comparisons: Vec<Comparison> = reports.iter().filter_map(|r| r.comparison.clone()).collect();
    write_comparison_csv(&comparisons, out_root.join("comparison.csv"))?;
    Ok(reports)
}
