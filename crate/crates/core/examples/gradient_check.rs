//! Compares backprop against central differences on a few random networks.
//!
//! `cargo run --example gradient_check`

use acet_lab::harness::verify::{random_inputs, random_stochastic, GRAD_CHECK_H};
use acet_lab::nncore::{grad_check_max_rel_err, Mlp, RngState};

fn main() -> acet_lab::Result<()> {
    let mut rng = RngState::new(11);
    for widths in [vec![2, 5, 3], vec![3, 16, 16, 3], vec![4, 8, 8, 8, 10]] {
        let model = Mlp::init(&widths, &mut rng)?;
        let x = random_inputs(8, widths[0], &mut rng);
        // Soft targets exercise the general (p - y) / batch output gradient.
        let y = random_stochastic(8, *widths.last().unwrap(), &mut rng);
        let err = grad_check_max_rel_err(&model, &x, &y, GRAD_CHECK_H)?;
        println!("{widths:?}: {} params, max relative error {err:.2e}", model.param_count());
    }
    Ok(())
}
