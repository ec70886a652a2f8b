//! Dense MLP with ReLU hidden layers and a softmax head.
//!
//! Layer weights are stored `fan_in x fan_out`, so a layer maps a batch as
//! `Z = A · W + b`. Gradients are of the mean soft-target cross-entropy.

use crate::error::{Error, Result};
use crate::nncore::loss::{check_row_stochastic, softmax_rows_in_place};
use crate::nncore::{Matrix, RngState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Softmax,
    Identity,
}

impl Activation {
    pub(crate) fn tag(self) -> u8 {
        match self {
            Activation::Relu => 0,
            Activation::Softmax => 1,
            Activation::Identity => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Activation::Relu),
            1 => Some(Activation::Softmax),
            2 => Some(Activation::Identity),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub weights: Matrix,
    pub biases: Vec<f64>,
    pub activation: Activation,
}

impl DenseLayer {
    pub fn fan_in(&self) -> usize {
        self.weights.rows()
    }

    pub fn fan_out(&self) -> usize {
        self.weights.cols()
    }
}

#[derive(Debug, Clone)]
pub struct Mlp {
    layers: Vec<DenseLayer>,
    /// Bumped on every mutable access to the parameters; caches remember it.
    generation: u64,
}

impl PartialEq for Mlp {
    fn eq(&self, other: &Self) -> bool {
        self.layers == other.layers
    }
}

impl Mlp {
    /// Assembles a model from explicit layers, checking the chain of widths.
    pub fn from_layers(layers: Vec<DenseLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidArchitecture("model has no layers".into()));
        }
        for (i, layer) in layers.iter().enumerate() {
            if layer.fan_in() == 0 || layer.fan_out() == 0 {
                return Err(Error::InvalidArchitecture(format!("layer {i} has zero width")));
            }
            if layer.biases.len() != layer.fan_out() {
                return Err(Error::InvalidArchitecture(format!(
                    "layer {i}: {} biases for {} outputs",
                    layer.biases.len(),
                    layer.fan_out()
                )));
            }
            let last = i + 1 == layers.len();
            if layer.activation == Activation::Softmax && !last {
                return Err(Error::InvalidArchitecture(format!(
                    "softmax on hidden layer {i}"
                )));
            }
            if last && layer.activation != Activation::Softmax {
                return Err(Error::InvalidArchitecture(
                    "final layer must be softmax".into(),
                ));
            }
            if i > 0 && layers[i - 1].fan_out() != layer.fan_in() {
                return Err(Error::InvalidArchitecture(format!(
                    "layer {} outputs {} but layer {i} expects {}",
                    i - 1,
                    layers[i - 1].fan_out(),
                    layer.fan_in()
                )));
            }
        }
        Ok(Self {
            layers,
            generation: 0,
        })
    }

    /// He-initialized MLP: `N(0, 2/fan_in)` weights, zero biases, ReLU hidden
    /// layers and a softmax output layer.
    pub fn init(widths: &[usize], rng: &mut RngState) -> Result<Self> {
        Self::build(widths, |fan_in, _| {
            let std = (2.0 / fan_in as f64).sqrt();
            std * rng.normal()
        })
    }

    /// Same architecture as [`Mlp::init`] with every parameter zero.
    pub fn zeroed(widths: &[usize]) -> Result<Self> {
        Self::build(widths, |_, _| 0.0)
    }

    fn build(widths: &[usize], mut weight: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::InvalidArchitecture(format!(
                "need at least input and output widths, got {widths:?}"
            )));
        }
        if widths.contains(&0) {
            return Err(Error::InvalidArchitecture(format!(
                "zero width in {widths:?}"
            )));
        }
        let n_layers = widths.len() - 1;
        let layers = widths
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let data = (0..fan_in * fan_out).map(|_| weight(fan_in, fan_out)).collect();
                DenseLayer {
                    weights: Matrix::from_vec(fan_in, fan_out, data).expect("sized buffer"),
                    biases: vec![0.0; fan_out],
                    activation: if i + 1 == n_layers {
                        Activation::Softmax
                    } else {
                        Activation::Relu
                    },
                }
            })
            .collect();
        Self::from_layers(layers)
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    /// Mutable parameter access; invalidates outstanding forward caches.
    pub fn layers_mut(&mut self) -> &mut [DenseLayer] {
        self.generation += 1;
        &mut self.layers
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn n_inputs(&self) -> usize {
        self.layers[0].fan_in()
    }

    pub fn n_classes(&self) -> usize {
        self.layers[self.layers.len() - 1].fan_out()
    }

    pub fn widths(&self) -> Vec<usize> {
        std::iter::once(self.n_inputs())
            .chain(self.layers.iter().map(DenseLayer::fan_out))
            .collect()
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.as_slice().len() + l.biases.len())
            .sum()
    }

    /// All parameters flattened layer by layer (weights then biases).
    pub fn flat_params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            out.extend_from_slice(l.weights.as_slice());
            out.extend_from_slice(&l.biases);
        }
        out
    }

    fn check_input(&self, x: &Matrix) -> Result<()> {
        if x.cols() != self.n_inputs() {
            return Err(Error::Dimension(format!(
                "input has {} features, model expects {}",
                x.cols(),
                self.n_inputs()
            )));
        }
        Ok(())
    }

    /// Class probabilities together with every intermediate needed by [`Mlp::backward`].
    pub fn forward(&self, x: &Matrix) -> Result<(Matrix, ForwardCache)> {
        self.check_input(x)?;
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut post: Vec<Matrix> = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let input = post.last().unwrap_or(x);
            let z = affine(layer, input)?;
            let a = activate(layer.activation, &z);
            pre.push(z);
            post.push(a);
        }
        let probs = post.last().expect("non-empty model").clone();
        let cache = ForwardCache {
            input: x.clone(),
            pre,
            post,
            generation: self.generation,
        };
        Ok((probs, cache))
    }

    /// Class probabilities only; nothing is retained.
    pub fn predict(&self, x: &Matrix) -> Result<Matrix> {
        self.check_input(x)?;
        let mut a = x.clone();
        for layer in &self.layers {
            let mut z = affine(layer, &a)?;
            apply_in_place(layer.activation, &mut z);
            a = z;
        }
        Ok(a)
    }

    /// Gradients of the mean cross-entropy against `targets` for the batch
    /// that produced `cache`.
    pub fn backward(&self, cache: &ForwardCache, targets: &Matrix) -> Result<Gradients> {
        self.check_cache(cache)?;
        let probs = cache.post.last().expect("non-empty cache");
        if targets.shape() != probs.shape() {
            return Err(Error::Dimension(format!(
                "targets are {:?} but the batch produced {:?}",
                targets.shape(),
                probs.shape()
            )));
        }
        check_row_stochastic(targets)?;
        Ok(self.backward_unchecked(cache, targets))
    }

    pub(crate) fn backward_unchecked(&self, cache: &ForwardCache, targets: &Matrix) -> Gradients {
        let probs = cache.post.last().expect("non-empty cache");
        let batch = probs.rows().max(1) as f64;

        // Softmax + cross-entropy: dL/dz = (p - y) / batch.
        let mut delta = Matrix::zeros(probs.rows(), probs.cols());
        for ((d, &p), &y) in delta
            .as_mut_slice()
            .iter_mut()
            .zip(probs.as_slice())
            .zip(targets.as_slice())
        {
            *d = (p - y) / batch;
        }
        let logits = delta.clone();

        let mut layers = Vec::with_capacity(self.layers.len());
        for i in (0..self.layers.len()).rev() {
            let input = if i == 0 { &cache.input } else { &cache.post[i - 1] };
            let weights = input.t_matmul(&delta).expect("cache shapes checked");
            let biases = delta.column_sums();
            if i > 0 {
                let mut upstream = delta
                    .matmul_t(&self.layers[i].weights)
                    .expect("cache shapes checked");
                match self.layers[i - 1].activation {
                    Activation::Relu => {
                        for (g, &z) in upstream
                            .as_mut_slice()
                            .iter_mut()
                            .zip(cache.pre[i - 1].as_slice())
                        {
                            if z <= 0.0 {
                                *g = 0.0;
                            }
                        }
                    }
                    Activation::Identity => {}
                    Activation::Softmax => unreachable!("softmax only on the final layer"),
                }
                delta = upstream;
            }
            layers.push(ParamGrads { weights, biases });
        }
        layers.reverse();
        Gradients { layers, logits }
    }

    fn check_cache(&self, cache: &ForwardCache) -> Result<()> {
        if cache.generation != self.generation {
            return Err(Error::Consistency(format!(
                "cache was produced at parameter generation {}, model is at {}",
                cache.generation, self.generation
            )));
        }
        if cache.pre.len() != self.layers.len() || cache.input.cols() != self.n_inputs() {
            return Err(Error::Consistency(
                "cache does not match this model's architecture".into(),
            ));
        }
        for (layer, z) in self.layers.iter().zip(&cache.pre) {
            if z.cols() != layer.fan_out() || z.rows() != cache.input.rows() {
                return Err(Error::Consistency(
                    "cache does not match this model's architecture".into(),
                ));
            }
        }
        Ok(())
    }
}

fn affine(layer: &DenseLayer, input: &Matrix) -> Result<Matrix> {
    let mut z = input.matmul(&layer.weights)?;
    z.add_row_vector(&layer.biases);
    Ok(z)
}

fn activate(act: Activation, z: &Matrix) -> Matrix {
    let mut a = z.clone();
    apply_in_place(act, &mut a);
    a
}

fn apply_in_place(act: Activation, m: &mut Matrix) {
    match act {
        Activation::Relu => m.as_mut_slice().iter_mut().for_each(|x| *x = x.max(0.0)),
        Activation::Softmax => softmax_rows_in_place(m),
        Activation::Identity => {}
    }
}

/// Pre- and post-activation values of every layer for one batch.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    input: Matrix,
    pre: Vec<Matrix>,
    post: Vec<Matrix>,
    generation: u64,
}

impl ForwardCache {
    pub fn probs(&self) -> &Matrix {
        self.post.last().expect("non-empty cache")
    }

    pub fn pre_activations(&self) -> &[Matrix] {
        &self.pre
    }

    pub fn activations(&self) -> &[Matrix] {
        &self.post
    }
}

/// Gradient (or any parameter-shaped buffer) for one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrads {
    pub weights: Matrix,
    pub biases: Vec<f64>,
}

impl ParamGrads {
    fn zeros_like(layer: &DenseLayer) -> Self {
        Self {
            weights: Matrix::zeros(layer.fan_in(), layer.fan_out()),
            biases: vec![0.0; layer.fan_out()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<ParamGrads>,
    /// dL/d(output logits), one row per sample.
    pub logits: Matrix,
}

impl Gradients {
    pub fn zeros_like(model: &Mlp) -> Self {
        Self {
            layers: model.layers().iter().map(ParamGrads::zeros_like).collect(),
            logits: Matrix::zeros(0, model.n_classes()),
        }
    }

    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for l in &self.layers {
            out.extend_from_slice(l.weights.as_slice());
            out.extend_from_slice(&l.biases);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.flat().iter().fold(0.0, |m, g| m.max(g.abs()))
    }

    /// True when every layer has the same shape as the model's.
    pub fn matches(&self, model: &Mlp) -> bool {
        self.layers.len() == model.layers().len()
            && self.layers.iter().zip(model.layers()).all(|(g, l)| {
                g.weights.shape() == l.weights.shape() && g.biases.len() == l.biases.len()
            })
    }
}
