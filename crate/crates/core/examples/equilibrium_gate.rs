//! Effect of the equilibrium threshold on how many batch updates ACET skips.
//!
//! Cross-entropy against a soft target never falls below the target's own
//! entropy, so small thresholds only bite once t reaches 1 and the data is
//! nearly separable.
//!
//! `cargo run --example equilibrium_gate`

use acet_lab::acet::{train_acet, TrainConfig};
use acet_lab::datasets::{train_test_gen, GeneratorSpec};
use acet_lab::nncore::{Mlp, RngState, Stream};

fn main() -> acet_lab::Result<()> {
    // Nearly noise-free moons, so the one-hot loss can get small.
    let gen = GeneratorSpec::ComplexMoons { noise_std: 0.02, warp: 0.3 };
    let (train, test) = train_test_gen(&gen, 400, 400, 2)?;
    let init = Mlp::init(&[2, 64, 64, 2], &mut RngState::for_stream(2, Stream::Init))?;

    println!("{:>8} {:>8} {:>8} {:>7} {:>9}", "epsilon", "updates", "skipped", "epochs", "best acc");
    for epsilon in [1e-12, 1e-5, 1e-3, 1e-2, 0.1, 10.0] {
        let config = TrainConfig { epsilon, max_epochs: 100, lr: 3e-3, ..Default::default() };
        let (model, h) = train_acet(init.clone(), &train, &test, &config, &mut RngState::for_stream(2, Stream::Shuffle))?;
        let frozen = if model.flat_params() == init.flat_params() { " (untouched)" } else { "" };
        println!(
            "{epsilon:>8.0e} {:>8} {:>8} {:>7} {:>9.4}{frozen}",
            h.total_updates(),
            h.total_skipped(),
            h.epochs(),
            h.best_test_acc
        );
    }
    Ok(())
}
