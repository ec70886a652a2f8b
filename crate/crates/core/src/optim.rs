//! Adam with bias correction, and an optional decaying learning rate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nncore::{Gradients, Mlp};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamHyper {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamHyper {
    pub fn with_lr(lr: f64) -> Self {
        Self {
            lr,
            ..Self::default()
        }
    }
}

impl Default for AdamHyper {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Learning rate as a function of the optimizer step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum LrSchedule {
    Constant { base_lr: f64 },
    /// `base_lr / (1 + decay * step)`; satisfies the Robbins–Monro conditions.
    InverseDecay { base_lr: f64, decay: f64 },
}

impl LrSchedule {
    pub fn validate(&self) -> Result<()> {
        let (base, decay) = match *self {
            LrSchedule::Constant { base_lr } => (base_lr, 0.0),
            LrSchedule::InverseDecay { base_lr, decay } => (base_lr, decay),
        };
        if !(base > 0.0 && base.is_finite()) {
            return Err(Error::Config(format!("learning rate must be positive, got {base}")));
        }
        if !(decay >= 0.0 && decay.is_finite()) {
            return Err(Error::Config(format!("decay must be non-negative, got {decay}")));
        }
        Ok(())
    }

    pub fn lr_at(&self, step: u64) -> f64 {
        match *self {
            LrSchedule::Constant { base_lr } => base_lr,
            LrSchedule::InverseDecay { base_lr, decay } => base_lr / (1.0 + decay * step as f64),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdamState {
    pub hyper: AdamHyper,
    m: Gradients,
    v: Gradients,
    step_count: u64,
}

impl AdamState {
    pub fn new(model: &Mlp, hyper: AdamHyper) -> Result<Self> {
        if !(hyper.lr > 0.0 && hyper.lr.is_finite()) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                hyper.lr
            )));
        }
        Ok(Self {
            hyper,
            m: Gradients::zeros_like(model),
            v: Gradients::zeros_like(model),
            step_count: 0,
        })
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn first_moment(&self) -> &Gradients {
        &self.m
    }

    pub fn second_moment(&self) -> &Gradients {
        &self.v
    }

    /// One bias-corrected Adam update at the configured learning rate.
    pub fn step(&mut self, model: &mut Mlp, grads: &Gradients) -> Result<()> {
        let lr = self.hyper.lr;
        self.step_with_lr(model, grads, lr)
    }

    /// One update at an explicit learning rate (used with [`LrSchedule`]).
    pub fn step_with_lr(&mut self, model: &mut Mlp, grads: &Gradients, lr: f64) -> Result<()> {
        if !grads.matches(model) || !self.m.matches(model) {
            return Err(Error::Dimension(
                "gradient or optimizer state does not match the model".into(),
            ));
        }
        self.step_count += 1;
        let AdamHyper {
            beta1, beta2, eps, ..
        } = self.hyper;
        let t = self.step_count as i32;
        let bc1 = 1.0 - beta1.powi(t);
        let bc2 = 1.0 - beta2.powi(t);

        let update = |theta: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64]| {
            for i in 0..theta.len() {
                m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
                v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
                let m_hat = m[i] / bc1;
                let v_hat = v[i] / bc2;
                theta[i] -= lr * m_hat / (v_hat.sqrt() + eps);
            }
        };

        for (((layer, g), m), v) in model
            .layers_mut()
            .iter_mut()
            .zip(&grads.layers)
            .zip(&mut self.m.layers)
            .zip(&mut self.v.layers)
        {
            update(
                layer.weights.as_mut_slice(),
                g.weights.as_slice(),
                m.weights.as_mut_slice(),
                v.weights.as_mut_slice(),
            );
            update(&mut layer.biases, &g.biases, &mut m.biases, &mut v.biases);
        }
        Ok(())
    }
}
