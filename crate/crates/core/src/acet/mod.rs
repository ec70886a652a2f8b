//! ACET: progressive targets, the equilibrium gate, and the two training
//! loops.

pub mod config;
pub mod gate;
pub mod history;
pub mod schedule;
pub mod train;

pub use config::{Method, TrainConfig};
pub use gate::EquilibriumGate;
pub use history::{EpochRecord, IncrementCheck, RunHistory, StopReason};
pub use schedule::{derivative_bound_inf, loss_jump_bound, TargetSchedule};
pub use train::{evaluate, predict_all, train, train_acet, train_standard};
