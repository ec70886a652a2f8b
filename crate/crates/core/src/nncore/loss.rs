//! Softmax and soft-target cross-entropy.

use crate::error::{Error, Result};
use crate::nncore::Matrix;

/// Floor applied to probabilities before taking logs.
pub const LOG_CLAMP: f64 = 1e-12;

/// Row sums of a target matrix must be within this of one.
pub const ROW_SUM_TOL: f64 = 1e-9;

/// Row-wise softmax with max subtraction.
pub fn softmax_rows(logits: &Matrix) -> Matrix {
    let mut out = logits.clone();
    softmax_rows_in_place(&mut out);
    out
}

pub(crate) fn softmax_rows_in_place(m: &mut Matrix) {
    for r in 0..m.rows() {
        let row = m.row_mut(r);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for x in row.iter_mut() {
            *x = (*x - max).exp();
            sum += *x;
        }
        for x in row.iter_mut() {
            *x /= sum;
        }
    }
}

/// Mean over rows of `-Σ targets · ln(max(probs, 1e-12))`.
///
/// Targets may be any row-stochastic matrix (one-hot, smoothed or
/// progressive). The result is non-negative.
pub fn cross_entropy(probs: &Matrix, targets: &Matrix) -> Result<f64> {
    if probs.shape() != targets.shape() {
        return Err(Error::Dimension(format!(
            "probs are {:?} but targets are {:?}",
            probs.shape(),
            targets.shape()
        )));
    }
    check_row_stochastic(targets)?;
    if probs.rows() == 0 {
        return Ok(0.0);
    }
    Ok(cross_entropy_unchecked(probs, targets))
}

pub(crate) fn cross_entropy_unchecked(probs: &Matrix, targets: &Matrix) -> f64 {
    let total: f64 = probs
        .as_slice()
        .iter()
        .zip(targets.as_slice())
        .map(|(&p, &y)| if y == 0.0 { 0.0 } else { -y * p.max(LOG_CLAMP).ln() })
        .sum();
    // -0.0 for exact matches; report +0.
    (total / probs.rows() as f64).max(0.0)
}

pub(crate) fn check_row_stochastic(targets: &Matrix) -> Result<()> {
    for (i, row) in targets.row_iter().enumerate() {
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL || row.iter().any(|&y| !(0.0..=1.0).contains(&y)) {
            return Err(Error::Domain(format!(
                "target row {i} is not a probability vector (sum {sum})"
            )));
        }
    }
    Ok(())
}

/// One-hot rows for `labels` over `n_classes`.
pub fn one_hot(labels: &[usize], n_classes: usize) -> Matrix {
    let mut m = Matrix::zeros(labels.len(), n_classes);
    for (r, &c) in labels.iter().enumerate() {
        m.set(r, c, 1.0);
    }
    m
}

/// Fraction of rows whose argmax equals the label.
pub fn accuracy(probs: &Matrix, labels: &[usize]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let hits = probs
        .argmax_rows()
        .iter()
        .zip(labels)
        .filter(|(p, l)| p == l)
        .count();
    hits as f64 / labels.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_row_from_equal_logits() {
        let p = softmax_rows(&Matrix::from_rows(&[[0.0, 0.0, 0.0]]).unwrap());
        for &x in p.row(0) {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn large_logit_gap_saturates_without_overflow() {
        let p = softmax_rows(&Matrix::from_rows(&[[1000.0, 0.0]]).unwrap());
        assert!((p.get(0, 0) - 1.0).abs() < 1e-12);
        assert!(p.get(0, 1).abs() < 1e-12);
        assert!(p.is_finite());
    }

    #[test]
    fn shift_invariance() {
        let z = Matrix::from_rows(&[[0.3, -1.2, 2.5, 0.0]]).unwrap();
        let shifted = Matrix::from_rows(&[[100.3, 98.8, 102.5, 100.0]]).unwrap();
        assert!(softmax_rows(&z).max_abs_diff(&softmax_rows(&shifted)) < 1e-12);
    }

    #[test]
    fn matched_one_hot_is_zero() {
        let y = one_hot(&[0, 2], 3);
        assert_eq!(cross_entropy(&y, &y).unwrap(), 0.0);
    }

    #[test]
    fn hand_evaluated_losses() {
        let u = Matrix::filled(1, 2, 0.5);
        assert!((cross_entropy(&u, &u).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);

        let p = Matrix::from_rows(&[[0.25, 0.75]]).unwrap();
        let y = Matrix::from_rows(&[[0.0, 1.0]]).unwrap();
        assert!((cross_entropy(&p, &y).unwrap() - 0.287682).abs() < 1e-6);
    }

    #[test]
    fn zero_probability_is_clamped() {
        let p = Matrix::from_rows(&[[1.0, 0.0]]).unwrap();
        let y = Matrix::from_rows(&[[0.0, 1.0]]).unwrap();
        let l = cross_entropy(&p, &y).unwrap();
        assert!((l - (-LOG_CLAMP.ln())).abs() < 1e-12);
    }

    #[test]
    fn shape_and_target_errors() {
        let p = Matrix::filled(2, 2, 0.5);
        assert!(matches!(
            cross_entropy(&p, &Matrix::filled(2, 3, 1.0 / 3.0)),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            cross_entropy(&p, &Matrix::filled(2, 2, 0.6)),
            Err(Error::Domain(_))
        ));
    }
}
