//! Progressive targets: `y_c(t) = t · onehot(c) + (1 − t) · 1/n`.
//!
//! At `t = 0` every class sees the uniform distribution, at `t = 1` the
//! plain one-hot vector. The path is linear in `t`, so its derivative is the
//! constant `onehot(c) − 1/n`, whose max-norm is `1 − 1/n`.

use crate::error::{Error, Result};
use crate::nncore::loss::LOG_CLAMP;
use crate::nncore::Matrix;

/// Tolerance for `1/dt` being an integer.
const STEP_COUNT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSchedule {
    n_classes: usize,
    dt: f64,
    steps: usize,
}

impl TargetSchedule {
    pub fn new(n_classes: usize, dt: f64) -> Result<Self> {
        if n_classes < 2 {
            return Err(Error::Domain(format!(
                "need at least two classes, got {n_classes}"
            )));
        }
        if !(dt > 0.0 && dt <= 1.0) {
            return Err(Error::Config(format!("increment step must lie in (0, 1], got {dt}")));
        }
        let inv = 1.0 / dt;
        let steps = inv.round();
        if (inv - steps).abs() > STEP_COUNT_TOL {
            return Err(Error::Config(format!(
                "increment step {dt} does not divide 1 into a whole number of steps"
            )));
        }
        Ok(Self {
            n_classes,
            dt,
            steps: steps as usize,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Target distribution for class `class_index` at time `t`.
    pub fn target_vector(&self, t: f64, class_index: usize) -> Result<Vec<f64>> {
        check_t(t)?;
        if class_index >= self.n_classes {
            return Err(Error::Domain(format!(
                "class {class_index} out of range for {} classes",
                self.n_classes
            )));
        }
        Ok(self.target_vector_unchecked(t, class_index))
    }

    fn target_vector_unchecked(&self, t: f64, class_index: usize) -> Vec<f64> {
        let floor = (1.0 - t) / self.n_classes as f64;
        let mut v = vec![floor; self.n_classes];
        v[class_index] = t + floor;
        v
    }

    /// Row-stacked targets for a batch of labels.
    pub fn targets(&self, t: f64, labels: &[usize]) -> Result<Matrix> {
        check_t(t)?;
        let n = self.n_classes;
        if let Some(&bad) = labels.iter().find(|&&c| c >= n) {
            return Err(Error::Domain(format!("class {bad} out of range for {n} classes")));
        }
        let floor = (1.0 - t) / n as f64;
        let mut m = Matrix::filled(labels.len(), n, floor);
        for (r, &c) in labels.iter().enumerate() {
            m.set(r, c, t + floor);
        }
        Ok(m)
    }

    /// `[dt, 2·dt, …, 1]`, with the last value pinned to exactly 1.
    pub fn increment_times(&self) -> Vec<f64> {
        (1..=self.steps)
            .map(|k| if k == self.steps { 1.0 } else { k as f64 * self.dt })
            .collect()
    }

    /// `onehot(c) − 1/n`, the time derivative of the target path.
    pub fn target_derivative(&self, class_index: usize) -> Vec<f64> {
        let u = 1.0 / self.n_classes as f64;
        (0..self.n_classes)
            .map(|j| if j == class_index { 1.0 - u } else { -u })
            .collect()
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 1], got {t}")));
    }
    Ok(())
}

/// `K = 1 − 1/n`, the max-norm of the target derivative.
pub fn derivative_bound_inf(n_classes: usize) -> Result<f64> {
    if n_classes < 2 {
        return Err(Error::Domain(format!(
            "need at least two classes, got {n_classes}"
        )));
    }
    Ok(1.0 - 1.0 / n_classes as f64)
}

/// Upper bound on `|L(θ, y(t + dt)) − L(θ, y(t))|` at fixed parameters.
///
/// The loss change is `−dt · Σ_n (onehot − 1/n)_n · ln p_n` per row; Hölder
/// with `‖onehot − 1/n‖₁ = 2K` gives `dt · 2K · max |ln p|`.
pub fn loss_jump_bound(probs: &Matrix, schedule: &TargetSchedule, dt: f64) -> f64 {
    if dt == 0.0 {
        return 0.0;
    }
    let k = 1.0 - 1.0 / schedule.n_classes() as f64;
    let max_log = probs
        .as_slice()
        .iter()
        .map(|&p| p.max(LOG_CLAMP).ln().abs())
        .fold(0.0, f64::max);
    dt * 2.0 * k * max_log
}
