//! Writes one sample of each synthetic generator to CSV for inspection.
//!
//! `cargo run --example synthetic_datasets -- [out_dir]`

use std::fmt::Write as _;
use std::path::PathBuf;

use acet_lab::harness::bench::{synthetic_spec, SYNTHETIC_BENCHMARKS};
use acet_lab::harness::DatasetSpec;
use acet_lab::nncore::RngState;

fn main() -> acet_lab::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("acet-data"), PathBuf::from);
    std::fs::create_dir_all(&out)?;
    for name in SYNTHETIC_BENCHMARKS {
        let spec = synthetic_spec(name, &out).expect("built-in");
        let DatasetSpec::Synthetic { generator, n_train, .. } = &spec.dataset else {
            unreachable!("synthetic benchmark")
        };
        let data = generator.generate(*n_train, &mut RngState::new(0))?;
        let mut csv = String::new();
        let cols: Vec<String> = (0..data.n_features()).map(|j| format!("x{j}")).collect();
        writeln!(csv, "{},label", cols.join(",")).unwrap();
        for (row, label) in data.x.row_iter().zip(&data.labels) {
            let vals: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
            writeln!(csv, "{},{label}", vals.join(",")).unwrap();
        }
        let path = out.join(format!("{name}.csv"));
        std::fs::write(&path, csv)?;
        println!("{name}: {} samples, class counts {:?} -> {}", data.len(), data.class_counts(), path.display());
    }
    Ok(())
}
