//! Dense evaluation of a 2-D classifier for decision-boundary plots.

use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::report::fmt_sig9;
use crate::nncore::{Matrix, Mlp};

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub class: usize,
    pub probs: Vec<f64>,
}

/// Evaluates `model` on a `resolution x resolution` lattice covering
/// `bounds = [[x_lo, x_hi], [y_lo, y_hi]]`, endpoints included.
///
/// Rows sweep x fastest. Ties in the argmax go to the lowest class index.
pub fn decision_grid(model: &Mlp, bounds: [[f64; 2]; 2], resolution: usize) -> Result<Vec<GridPoint>> {
    if model.n_inputs() != 2 {
        return Err(Error::Dimension(format!(
            "decision grids need a 2-feature model, this one takes {}",
            model.n_inputs()
        )));
    }
    if resolution < 2 {
        return Err(Error::Config(format!("grid resolution must be at least 2, got {resolution}")));
    }
    let xs = axis(bounds[0], resolution);
    let ys = axis(bounds[1], resolution);

    let mut points = Vec::with_capacity(resolution * resolution);
    // One row of the lattice per forward pass.
    for &y in &ys {
        let mut data = Vec::with_capacity(2 * resolution);
        for &x in &xs {
            data.push(x);
            data.push(y);
        }
        let probs = model.predict(&Matrix::from_vec(resolution, 2, data)?)?;
        let classes = probs.argmax_rows();
        for (i, &x) in xs.iter().enumerate() {
            points.push(GridPoint {
                x,
                y,
                class: classes[i],
                probs: probs.row(i).to_vec(),
            });
        }
    }
    Ok(points)
}

fn axis([lo, hi]: [f64; 2], n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Writes `x,y,class,p0,…,p{n-1}`.
pub fn write_grid_csv(points: &[GridPoint], path: impl AsRef<Path>) -> Result<()> {
    let n_classes = points.first().map_or(0, |p| p.probs.len());
    let mut out = String::from("x,y,class");
    for c in 0..n_classes {
        out.push_str(&format!(",p{c}"));
    }
    out.push('\n');
    for p in points {
        out.push_str(&format!("{},{},{}", fmt_sig9(p.x), fmt_sig9(p.y), p.class));
        for &q in &p.probs {
            out.push(',');
            out.push_str(&fmt_sig9(q));
        }
        out.push('\n');
    }
    if let Some(parent) = path.as_ref().parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}
