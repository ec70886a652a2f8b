use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::acet::gate::EquilibriumGate;
use crate::acet::schedule::TargetSchedule;
use crate::error::{Error, Result};
use crate::optim::LrSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Fixed one-hot (or smoothed) targets, every batch updates.
    #[serde(rename = "st", alias = "standard")]
    Standard,
    #[serde(rename = "acet")]
    Acet,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Standard => "st",
            Method::Acet => "acet",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "st" | "standard" => Ok(Method::Standard),
            "acet" => Ok(Method::Acet),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

/// Every knob of one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub method: Method,
    /// Equilibrium threshold ε.
    pub epsilon: f64,
    /// Increment step δt of the target schedule.
    pub dt: f64,
    pub epochs_per_increment: usize,
    /// Total epoch budget, ramp included.
    pub max_epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    /// When set, the learning rate decays as `lr / (1 + lr_decay · step)`.
    pub lr_decay: Option<f64>,
    pub seed: u64,
    pub early_stopping_patience: Option<usize>,
    /// Standard training against `(1 − α) · onehot + α/n` instead of one-hot.
    pub label_smoothing_alpha: Option<f64>,
    /// Record per-epoch wall time. Off gives byte-reproducible histories.
    pub record_wall_time: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            method: Method::Acet,
            epsilon: 1e-5,
            dt: 0.1,
            epochs_per_increment: 5,
            max_epochs: 200,
            batch_size: 32,
            lr: 1e-3,
            lr_decay: None,
            seed: 0,
            early_stopping_patience: None,
            label_smoothing_alpha: None,
            record_wall_time: true,
        }
    }
}

impl TrainConfig {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn lr_schedule(&self) -> LrSchedule {
        match self.lr_decay {
            None => LrSchedule::Constant { base_lr: self.lr },
            Some(decay) => LrSchedule::InverseDecay {
                base_lr: self.lr,
                decay,
            },
        }
    }

    pub fn gate(&self) -> Result<EquilibriumGate> {
        EquilibriumGate::new(self.epsilon)
    }

    pub fn schedule(&self, n_classes: usize) -> Result<TargetSchedule> {
        TargetSchedule::new(n_classes, self.dt)
    }

    /// Checks everything that does not depend on the dataset.
    pub fn validate(&self) -> Result<()> {
        self.lr_schedule().validate()?;
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        if self.max_epochs == 0 {
            return Err(Error::Config("max_epochs must be at least 1".into()));
        }
        if self.early_stopping_patience == Some(0) {
            return Err(Error::Config("early-stopping patience must be at least 1".into()));
        }
        if let Some(alpha) = self.label_smoothing_alpha {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::Config(format!(
                    "label smoothing alpha must lie in [0, 1], got {alpha}"
                )));
            }
            if self.method == Method::Acet {
                return Err(Error::Config(
                    "label smoothing is a standard-training mode; ACET evolves its own targets"
                        .into(),
                ));
            }
        }
        if self.method == Method::Acet {
            if self.epochs_per_increment == 0 {
                return Err(Error::Config("epochs_per_increment must be at least 1".into()));
            }
            self.gate()?;
            self.schedule(2)?;
        }
        Ok(())
    }
}
