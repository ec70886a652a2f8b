//! The fixed-parameter loss change at each target increment, next to its bound.
//!
//! `cargo run --example loss_jump`

use acet_lab::acet::{train_acet, TrainConfig};
use acet_lab::datasets::{train_test_gen, GeneratorSpec};
use acet_lab::nncore::{Mlp, RngState, Stream};

fn main() -> acet_lab::Result<()> {
    let (tr, te) = train_test_gen(&GeneratorSpec::Spiral { noise_std: 0.65 }, 300, 300, 0)?;
    let init = Mlp::init(&[2, 100, 100, 3], &mut RngState::for_stream(0, Stream::Init))?;
    let config = TrainConfig { max_epochs: 60, lr: 3e-3, ..Default::default() };
    let (_, h) = train_acet(init, &tr, &te, &config, &mut RngState::for_stream(0, Stream::Shuffle))?;

    println!("{:>6} {:>6} {:>12} {:>10}", "from", "to", "|jump|", "bound");
    for c in &h.increment_checks {
        println!(
            "{:>6.1} {:>6.1} {:>12.6} {:>10.6} {}",
            c.t_from,
            c.t_to,
            c.measured_jump.abs(),
            c.bound,
            if c.holds() { "ok" } else { "VIOLATED" }
        );
    }
    Ok(())
}
