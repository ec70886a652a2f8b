//! Dense numerics and the MLP model.

pub mod gradcheck;
pub mod loss;
pub mod matrix;
pub mod mlp;
pub mod rng;

pub use gradcheck::grad_check_max_rel_err;
pub use loss::{accuracy, cross_entropy, one_hot, softmax_rows, LOG_CLAMP};
pub use matrix::Matrix;
pub use mlp::{Activation, DenseLayer, ForwardCache, Gradients, Mlp, ParamGrads};
pub use rng::{RngState, Stream};
