//! A small training laboratory for ACET, progressive-target training of classifiers.
//!
//! ACET replaces the fixed one-hot target of a classifier with a target that
//! moves from the uniform distribution to one-hot over a schedule of
//! increments, and skips the parameter update of any mini-batch whose loss
//! is already below an equilibrium threshold. This crate implements it next
//! to a standard one-hot baseline, on a from-scratch `f64` MLP, and runs
//! seeded comparisons on synthetic benchmarks and MNIST.
//!
//! - [`nncore`]: matrices, the MLP, softmax cross-entropy, backprop, gradient checking
//! - [`optim`]: Adam and learning-rate schedules
//! - [`acet`]: target schedule, equilibrium gate, training loops
//! - [`datasets`]: synthetic generators and the MNIST IDX reader
//! - [`harness`]: experiment specs, multi-seed runs, CSV reports, decision grids, CLI
//!
//! ```no_run
//! use acet_lab::acet::{train_acet, Method, TrainConfig};
//! use acet_lab::datasets::{train_test_gen, GeneratorSpec};
//! use acet_lab::nncore::{Mlp, RngState, Stream};
//!
//! # fn main() -> acet_lab::Result<()> {
//! let (train, test) = train_test_gen(&GeneratorSpec::Spiral { noise_std: 0.2 }, 300, 300, 0)?;
//! let model = Mlp::init(&[2, 100, 100, 3], &mut RngState::for_stream(0, Stream::Init))?;
//! let config = TrainConfig { method: Method::Acet, ..Default::default() };
//! let (_model, history) = train_acet(model, &train, &test, &config,
//!     &mut RngState::for_stream(0, Stream::Shuffle))?;
//! println!("best test accuracy {:.4}", history.best_test_acc);
//! # Ok(())
//! # }
//! ```

pub mod acet;
pub mod datasets;
mod error;
pub mod harness;
pub mod nncore;
pub mod optim;

pub use error::{Error, Result};
