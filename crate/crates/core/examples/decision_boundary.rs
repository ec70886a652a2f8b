//! Trains ACET on the moons, checkpoints the model and exports a 200x200
//! decision grid for plotting.
//!
//! `cargo run --example decision_boundary -- [out_dir]`

use std::path::PathBuf;

use acet_lab::acet::{train_acet, TrainConfig};
use acet_lab::datasets::{train_test_gen, GeneratorSpec};
use acet_lab::harness::{decision_grid, load_model, save_model, write_grid_csv};
use acet_lab::nncore::{Mlp, RngState, Stream};

fn main() -> acet_lab::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("acet-grid"), PathBuf::from);
    let gen = GeneratorSpec::ComplexMoons { noise_std: 0.1, warp: 0.3 };
    let (train, test) = train_test_gen(&gen, 400, 400, 1)?;

    let model = Mlp::init(&[2, 100, 100, 2], &mut RngState::for_stream(1, Stream::Init))?;
    let config = TrainConfig { max_epochs: 80, lr: 3e-3, ..Default::default() };
    let (model, history) = train_acet(model, &train, &test, &config, &mut RngState::for_stream(1, Stream::Shuffle))?;
    println!("best test accuracy {:.4}", history.best_test_acc);

    let ckpt = out.join("moons.model");
    save_model(&model, &ckpt)?;
    let restored = load_model(&ckpt)?;
    assert_eq!(restored, model);

    let grid = decision_grid(&restored, [[-1.5, 2.5], [-1.2, 1.7]], 200)?;
    let counts = grid.iter().fold([0usize; 2], |mut acc, p| {
        acc[p.class] += 1;
        acc
    });
    let path = out.join("moons_grid.csv");
    write_grid_csv(&grid, &path)?;
    println!("{} grid points ({} / {} per class) in {}", grid.len(), counts[0], counts[1], path.display());
    Ok(())
}
