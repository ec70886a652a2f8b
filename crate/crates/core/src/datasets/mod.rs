//! Labeled datasets: four seeded synthetic generators and an MNIST IDX reader.

pub mod mnist;
pub mod split;
pub mod synthetic;

use crate::error::{Error, Result};
use crate::nncore::Matrix;

pub use mnist::load_mnist_idx;
pub use split::{train_test_gen, GeneratorSpec, TEST_SEED_MIX};
pub use synthetic::{
    gen_complex_moons, gen_complex_moons_warped, gen_interlocking_rings, gen_noisy_circles,
    gen_spiral, RING_CENTERS, RING_PLANES,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Matrix,
    pub labels: Vec<usize>,
    pub n_classes: usize,
    pub name: String,
}

impl Dataset {
    pub fn new(name: impl Into<String>, x: Matrix, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        let ds = Self {
            x,
            labels,
            n_classes,
            name: name.into(),
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.x.rows() {
            return Err(Error::Consistency(format!(
                "{}: {} labels for {} samples",
                self.name,
                self.labels.len(),
                self.x.rows()
            )));
        }
        if let Some(&bad) = self.labels.iter().find(|&&c| c >= self.n_classes) {
            return Err(Error::Consistency(format!(
                "{}: label {bad} but only {} classes",
                self.name, self.n_classes
            )));
        }
        if !self.x.is_finite() {
            return Err(Error::Consistency(format!("{}: non-finite feature", self.name)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.x.cols()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &c in &self.labels {
            counts[c] += 1;
        }
        counts
    }

    /// The first `n` samples (all of them if `n` exceeds the length).
    pub fn head(&self, n: usize) -> Dataset {
        let n = n.min(self.len());
        let idx: Vec<usize> = (0..n).collect();
        Dataset {
            x: self.x.select_rows(&idx),
            labels: self.labels[..n].to_vec(),
            n_classes: self.n_classes,
            name: self.name.clone(),
        }
    }
}
