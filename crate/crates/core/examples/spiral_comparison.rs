//! Standard training vs ACET on the three-arm spiral, averaged over seeds.
//!
//! `cargo run --example spiral_comparison -- [seeds] [out_dir]`

use std::path::PathBuf;

use acet_lab::harness::bench::synthetic_spec;
use acet_lab::harness::run_experiment_with;

fn main() -> acet_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().map_or(5, |s| s.parse().expect("seed count"));
    let out = args.next().map_or_else(|| std::env::temp_dir().join("acet-spiral"), PathBuf::from);

    let mut spec = synthetic_spec("spiral", &out).expect("built-in");
    spec.seeds = (0..seeds).collect();
    let report = run_experiment_with(&spec, |run| {
        println!(
            "seed {} {:>4}: best {:.4} after {} epochs",
            run.seed,
            run.method,
            run.history.best_test_acc,
            run.history.epochs()
        );
    })?;

    for row in &report.summary {
        println!("{:>4}: {:.2}% ± {:.2}, {:.3} s", row.method, 100.0 * row.mean_acc, 100.0 * row.std_acc, row.mean_time_s);
    }
    if let Some(c) = &report.comparison {
        println!("acet - st: {:+.2} points", 100.0 * c.acc_delta);
    }
    println!("CSVs in {}", spec.output_dir.display());
    Ok(())
}
