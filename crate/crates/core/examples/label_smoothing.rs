//! Fixed label smoothing versus the moving ACET target on noisy circles.
//!
//! `cargo run --example label_smoothing`

use acet_lab::acet::{train, Method, TrainConfig};
use acet_lab::datasets::{train_test_gen, GeneratorSpec};
use acet_lab::nncore::{Mlp, RngState, Stream};

fn main() -> acet_lab::Result<()> {
    let gen = GeneratorSpec::NoisyCircles { noise_std: 0.3, factor: 0.5 };
    let runs: [(&str, Method, Option<f64>); 4] = [
        ("one-hot", Method::Standard, None),
        ("smoothed 0.1", Method::Standard, Some(0.1)),
        ("smoothed 0.3", Method::Standard, Some(0.3)),
        ("acet", Method::Acet, None),
    ];
    for (label, method, alpha) in runs {
        let mut accs = Vec::new();
        for seed in 0..3 {
            let (tr, te) = train_test_gen(&gen, 400, 400, seed)?;
            let init = Mlp::init(&[2, 100, 100, 2], &mut RngState::for_stream(seed, Stream::Init))?;
            let config = TrainConfig {
                method,
                label_smoothing_alpha: alpha,
                max_epochs: 100,
                lr: 3e-3,
                seed,
                ..Default::default()
            };
            let (_, h) = train(init, &tr, &te, &config, &mut RngState::for_stream(seed, Stream::Shuffle))?;
            accs.push(h.best_test_acc);
        }
        let mean = accs.iter().sum::<f64>() / accs.len() as f64;
        println!("{label:>13}: mean best test accuracy {:.2}%", 100.0 * mean);
    }
    Ok(())
}
