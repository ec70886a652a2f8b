//! Central-difference verification of [`Mlp::backward`].

use crate::error::Result;
use crate::nncore::loss::cross_entropy;
use crate::nncore::{Matrix, Mlp};

/// Largest relative disagreement between analytic and central-difference
/// gradients over every parameter of `model`.
///
/// Each term is `|a - n| / max(|a|, |n|, 1e-8)`, so parameters whose true
/// gradient is zero do not blow the ratio up.
pub fn grad_check_max_rel_err(model: &Mlp, x: &Matrix, targets: &Matrix, h: f64) -> Result<f64> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let (_, cache) = model.forward(x)?;
    let analytic = model.backward(&cache, targets)?.flat();

    let loss_at = |m: &Mlp| -> Result<f64> { cross_entropy(&m.predict(x)?, targets) };

    let mut probe = model.clone();
    let mut worst: f64 = 0.0;
    let mut k = 0;
    for li in 0..model.layers().len() {
        let n_params = model.layers()[li].weights.as_slice().len() + model.layers()[li].biases.len();
        for j in 0..n_params {
            let original = *param_mut(&mut probe, li, j);
            *param_mut(&mut probe, li, j) = original + h;
            let plus = loss_at(&probe)?;
            *param_mut(&mut probe, li, j) = original - h;
            let minus = loss_at(&probe)?;
            *param_mut(&mut probe, li, j) = original;

            let numeric = (plus - minus) / (2.0 * h);
            let a = analytic[k];
            let denom = a.abs().max(numeric.abs()).max(1e-8);
            worst = worst.max((a - numeric).abs() / denom);
            k += 1;
        }
    }
    Ok(worst)
}

/// Parameter `j` of layer `li`, counting weights first and then biases.
fn param_mut(model: &mut Mlp, li: usize, j: usize) -> &mut f64 {
    let layer = &mut model.layers_mut()[li];
    let n_weights = layer.weights.as_slice().len();
    if j < n_weights {
        &mut layer.weights.as_mut_slice()[j]
    } else {
        &mut layer.biases[j - n_weights]
    }
}
