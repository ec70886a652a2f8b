use crate::error::{Error, Result};

/// Smallest threshold accepted by [`EquilibriumGate::new`].
pub const MIN_EPSILON: f64 = 1e-12;

/// The equilibrium test `L < ε`.
///
/// A batch whose loss passes the test is left alone: no backward pass and no
/// optimizer step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumGate {
    epsilon: f64,
}

impl EquilibriumGate {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= MIN_EPSILON) {
            return Err(Error::Config(format!(
                "equilibrium threshold must be finite and at least {MIN_EPSILON}, got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Strict: a loss equal to ε is out of equilibrium.
    #[inline]
    pub fn in_equilibrium(&self, loss: f64) -> bool {
        loss < self.epsilon
    }
}
