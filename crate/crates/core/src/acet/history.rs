use serde::{Deserialize, Serialize};

use crate::acet::config::Method;

/// Metrics for one epoch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    /// 1-based.
    pub epoch: usize,
    pub t_value: f64,
    /// Mean batch loss against the targets in force during the epoch.
    pub train_loss: f64,
    /// Accuracy of the pre-update batch predictions.
    pub train_acc: f64,
    /// Loss against one-hot labels on the held-out set.
    pub test_loss: f64,
    pub test_acc: f64,
    pub epoch_wall_seconds: f64,
    pub updates_performed: usize,
    pub updates_skipped: usize,
}

/// Fixed-parameter loss change measured when the target time advances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementCheck {
    pub t_from: f64,
    pub t_to: f64,
    /// `L(θ, y(t_to)) − L(θ, y(t_from))` on the training set.
    pub measured_jump: f64,
    pub bound: f64,
}

impl IncrementCheck {
    pub fn holds(&self) -> bool {
        self.measured_jump.abs() <= self.bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    EpochBudget,
    EarlyStopping,
    /// A whole epoch at `t = 1` sat inside the equilibrium set.
    Equilibrium,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHistory {
    pub method: Method,
    pub batches_per_epoch: usize,
    pub records: Vec<EpochRecord>,
    pub increment_checks: Vec<IncrementCheck>,
    pub best_test_acc: f64,
    pub total_wall_seconds: f64,
    pub stopped_early: bool,
    pub stop_reason: StopReason,
}

impl RunHistory {
    pub(crate) fn new(method: Method, batches_per_epoch: usize) -> Self {
        Self {
            method,
            batches_per_epoch,
            records: Vec::new(),
            increment_checks: Vec::new(),
            best_test_acc: 0.0,
            total_wall_seconds: 0.0,
            stopped_early: false,
            stop_reason: StopReason::EpochBudget,
        }
    }

    pub(crate) fn push(&mut self, record: EpochRecord) {
        self.best_test_acc = self.best_test_acc.max(record.test_acc);
        self.total_wall_seconds += record.epoch_wall_seconds;
        self.records.push(record);
    }

    pub fn epochs(&self) -> usize {
        self.records.len()
    }

    pub fn total_updates(&self) -> usize {
        self.records.iter().map(|r| r.updates_performed).sum()
    }

    pub fn total_skipped(&self) -> usize {
        self.records.iter().map(|r| r.updates_skipped).sum()
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.records.last()
    }

    /// Checks the bookkeeping invariants: non-decreasing `t`, and every
    /// batch of every epoch counted exactly once.
    pub fn check_invariants(&self) -> Result<(), String> {
        for w in self.records.windows(2) {
            if w[1].t_value < w[0].t_value {
                return Err(format!("t decreased at epoch {}", w[1].epoch));
            }
        }
        for r in &self.records {
            if r.updates_performed + r.updates_skipped != self.batches_per_epoch {
                return Err(format!(
                    "epoch {}: {} + {} batches, expected {}",
                    r.epoch, r.updates_performed, r.updates_skipped, self.batches_per_epoch
                ));
            }
        }
        Ok(())
    }
}
