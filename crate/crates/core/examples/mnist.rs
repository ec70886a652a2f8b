//! MNIST with an MLP 784-256-128-10, both methods, 20 epochs.
//!
//! Needs the four IDX files (uncompressed) in one directory:
//!
//! `cargo run --release --example mnist -- /path/to/mnist [limit_train]`

use std::path::PathBuf;

use acet_lab::harness::bench::mnist_spec_in;
use acet_lab::harness::{run_experiment_with, DatasetSpec};

fn main() -> acet_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(dir) = args.next().map(PathBuf::from) else {
        eprintln!("usage: mnist <dir with train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-*> [limit_train]");
        std::process::exit(2);
    };
    let limit: Option<usize> = args.next().map(|s| s.parse().expect("sample count"));

    let mut spec = mnist_spec_in(&dir, &std::env::temp_dir().join("acet-mnist"));
    if let DatasetSpec::Mnist { limit_train, .. } = &mut spec.dataset {
        *limit_train = limit;
    }
    let report = run_experiment_with(&spec, |run| {
        for r in &run.history.records {
            println!("{:>4} epoch {:>2} t={:.1} test acc {:.4}", run.method, r.epoch, r.t_value, r.test_acc);
        }
    })?;
    for row in &report.summary {
        println!("{:>4}: best test accuracy {:.2}%", row.method, 100.0 * row.mean_acc);
    }
    Ok(())
}
