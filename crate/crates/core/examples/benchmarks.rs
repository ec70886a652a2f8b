//! All four synthetic benchmarks with their checked-in settings, as a table.
//!
//! `cargo run --release --example benchmarks -- [seeds] [out_dir]`

use std::path::PathBuf;

use acet_lab::acet::Method;
use acet_lab::harness::bench::{run_bench, synthetic_specs};

fn main() -> acet_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().map_or(10, |s| s.parse().expect("seed count"));
    let out = args.next().map_or_else(|| PathBuf::from("results"), PathBuf::from);

    let mut specs = synthetic_specs(&out);
    for s in &mut specs {
        s.seeds = (0..seeds).collect();
    }
    let reports = run_bench(&specs, &out, |spec, run| {
        eprintln!("{} {} seed {} done", spec.name, run.method, run.seed);
    })?;

    println!("{:<20} {:>10} {:>10} {:>8} {:>9} {:>9} {:>6}", "dataset", "st acc", "acet acc", "delta", "st s", "acet s", "ratio");
    for r in &reports {
        let st = r.summary_for(Method::Standard).expect("st row");
        let ac = r.summary_for(Method::Acet).expect("acet row");
        let c = r.comparison.as_ref().expect("both methods ran");
        println!(
            "{:<20} {:>9.2}% {:>9.2}% {:>+8.2} {:>9.3} {:>9.3} {:>6.3}",
            r.name,
            100.0 * st.mean_acc,
            100.0 * ac.mean_acc,
            100.0 * c.acc_delta,
            st.mean_time_s,
            ac.mean_time_s,
            c.time_ratio
        );
    }
    Ok(())
}
