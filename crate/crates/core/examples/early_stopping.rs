//! Patience-based early stopping on test loss, with and without ACET.
//!
//! `cargo run --example early_stopping`

use acet_lab::acet::{train, Method, TrainConfig};
use acet_lab::datasets::{train_test_gen, GeneratorSpec};
use acet_lab::nncore::{Mlp, RngState, Stream};

fn main() -> acet_lab::Result<()> {
    let (tr, te) = train_test_gen(&GeneratorSpec::Spiral { noise_std: 0.65 }, 300, 300, 4)?;
    let init = Mlp::init(&[2, 100, 100, 3], &mut RngState::for_stream(4, Stream::Init))?;

    for method in [Method::Standard, Method::Acet] {
        for patience in [None, Some(20), Some(5)] {
            let config = TrainConfig {
                method,
                early_stopping_patience: patience,
                max_epochs: 300,
                lr: 3e-3,
                ..Default::default()
            };
            let (_, h) = train(init.clone(), &tr, &te, &config, &mut RngState::for_stream(4, Stream::Shuffle))?;
            let last = h.last().expect("at least one epoch");
            println!(
                "{method:>4} patience {:>4}: {:>3} epochs ({:?}), best acc {:.4}, last acc {:.4}",
                patience.map_or("none".to_string(), |p| p.to_string()),
                h.epochs(),
                h.stop_reason,
                h.best_test_acc,
                last.test_acc
            );
        }
    }
    Ok(())
}
