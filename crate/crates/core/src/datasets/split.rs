use serde::{Deserialize, Serialize};

use crate::datasets::{synthetic, Dataset};
use crate::error::{Error, Result};
use crate::nncore::RngState;

/// Mixed into the seed to derive the test-set stream (the 64-bit golden ratio).
pub const TEST_SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// A synthetic generator and its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Spiral {
        noise_std: f64,
    },
    ComplexMoons {
        noise_std: f64,
        #[serde(default = "default_warp")]
        warp: f64,
    },
    NoisyCircles {
        noise_std: f64,
        #[serde(default = "default_factor")]
        factor: f64,
    },
    InterlockingRings {
        noise_std: f64,
    },
}

fn default_warp() -> f64 {
    0.3
}

fn default_factor() -> f64 {
    0.5
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Spiral { .. } => "spiral",
            GeneratorSpec::ComplexMoons { .. } => "complex_moons",
            GeneratorSpec::NoisyCircles { .. } => "noisy_circles",
            GeneratorSpec::InterlockingRings { .. } => "interlocking_rings",
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            GeneratorSpec::Spiral { .. } | GeneratorSpec::InterlockingRings { .. } => 3,
            GeneratorSpec::ComplexMoons { .. } | GeneratorSpec::NoisyCircles { .. } => 2,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            GeneratorSpec::InterlockingRings { .. } => 3,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let noise = match *self {
            GeneratorSpec::Spiral { noise_std }
            | GeneratorSpec::ComplexMoons { noise_std, .. }
            | GeneratorSpec::InterlockingRings { noise_std } => noise_std,
            GeneratorSpec::NoisyCircles { noise_std, factor } => {
                if !(factor > 0.0 && factor < 1.0) {
                    return Err(Error::Config(format!("circle factor must lie in (0, 1), got {factor}")));
                }
                noise_std
            }
        };
        if !(noise >= 0.0 && noise.is_finite()) {
            return Err(Error::Config(format!("noise_std must be non-negative, got {noise}")));
        }
        Ok(())
    }

    /// `n` samples in total. Three-class generators need `n` divisible by 3.
    pub fn generate(&self, n: usize, rng: &mut RngState) -> Result<Dataset> {
        self.validate()?;
        let per_class = |n: usize| -> Result<usize> {
            if !n.is_multiple_of(3) {
                return Err(Error::Config(format!(
                    "{} needs a sample count divisible by 3, got {n}",
                    self.name()
                )));
            }
            Ok(n / 3)
        };
        Ok(match *self {
            GeneratorSpec::Spiral { noise_std } => synthetic::gen_spiral(per_class(n)?, noise_std, rng),
            GeneratorSpec::ComplexMoons { noise_std, warp } => {
                synthetic::gen_complex_moons_warped(n, noise_std, warp, rng)
            }
            GeneratorSpec::NoisyCircles { noise_std, factor } => {
                synthetic::gen_noisy_circles(n, noise_std, factor, rng)
            }
            GeneratorSpec::InterlockingRings { noise_std } => {
                synthetic::gen_interlocking_rings(per_class(n)?, noise_std, rng)
            }
        })
    }
}

/// Independent train and test draws from one generator.
///
/// The training set uses `seed`, the test set `seed ^ TEST_SEED_MIX`.
pub fn train_test_gen(
    spec: &GeneratorSpec,
    n_train: usize,
    n_test: usize,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let train = spec.generate(n_train, &mut RngState::new(seed))?;
    let test = spec.generate(n_test, &mut RngState::new(seed ^ TEST_SEED_MIX))?;
    Ok((train, test))
}
