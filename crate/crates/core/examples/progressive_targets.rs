//! How the training target moves from uniform to one-hot.
//!
//! `cargo run --example progressive_targets`

use acet_lab::acet::{derivative_bound_inf, TargetSchedule};

fn main() -> acet_lab::Result<()> {
    let schedule = TargetSchedule::new(3, 0.1)?;
    println!("target for class 0 of 3:");
    for t in std::iter::once(0.0).chain(schedule.increment_times()) {
        let y = schedule.target_vector(t, 0)?;
        println!("  t={t:.1}  [{:.4}, {:.4}, {:.4}]", y[0], y[1], y[2]);
    }

    println!("dy/dt for class 0: {:?}", schedule.target_derivative(0));
    for n in [2, 3, 10] {
        println!("max-norm bound K for n={n}: {:.6}", derivative_bound_inf(n)?);
    }
    Ok(())
}
