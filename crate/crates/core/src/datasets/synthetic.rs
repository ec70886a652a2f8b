//! The four synthetic benchmarks.
//!
//! Samples are emitted class by class. Every generator draws its Gaussian
//! noise from the supplied stream even when `noise_std` is zero, so the
//! stream position after generation depends only on the sample count.

use std::f64::consts::PI;

use crate::datasets::Dataset;
use crate::nncore::{Matrix, RngState};

/// Three intertwined spiral arms in the plane.
///
/// Point `i` of arm `k` has radius `r = i / n_per_class` and angle
/// `θ = 4k + 4r + N(0, noise_std)`, mapped to `(r sin θ, r cos θ)`.
pub fn gen_spiral(n_per_class: usize, noise_std: f64, rng: &mut RngState) -> Dataset {
    let n_classes = 3;
    let mut data = Vec::with_capacity(n_classes * n_per_class * 2);
    let mut labels = Vec::with_capacity(n_classes * n_per_class);
    for k in 0..n_classes {
        for i in 0..n_per_class {
            let r = i as f64 / n_per_class as f64;
            let theta = 4.0 * k as f64 + 4.0 * r + noise_std * rng.normal();
            data.push(r * theta.sin());
            data.push(r * theta.cos());
            labels.push(k);
        }
    }
    finish("spiral", 2, data, labels, n_classes)
}

/// Two interleaved half-circles with a `0.3 · sin(3α)` vertical warp.
pub fn gen_complex_moons(n_samples: usize, noise_std: f64, rng: &mut RngState) -> Dataset {
    gen_complex_moons_warped(n_samples, noise_std, 0.3, rng)
}

/// Moons with an explicit warp amplitude; `warp = 0` gives the classic shape.
///
/// Upper moon: `(cos α, sin α)`; lower moon: `(1 − cos α, 0.5 − sin α)`,
/// `α` evenly spaced over `[0, π]`. The upper moon takes the extra point
/// when `n_samples` is odd.
pub fn gen_complex_moons_warped(
    n_samples: usize,
    noise_std: f64,
    warp: f64,
    rng: &mut RngState,
) -> Dataset {
    let n_upper = n_samples.div_ceil(2);
    let n_lower = n_samples / 2;
    let mut data = Vec::with_capacity(n_samples * 2);
    let mut labels = Vec::with_capacity(n_samples);
    for (class, count) in [(0usize, n_upper), (1, n_lower)] {
        for i in 0..count {
            let alpha = if count > 1 {
                PI * i as f64 / (count - 1) as f64
            } else {
                0.0
            };
            let (x, y) = if class == 0 {
                (alpha.cos(), alpha.sin())
            } else {
                (1.0 - alpha.cos(), 0.5 - alpha.sin())
            };
            let y = y + warp * (3.0 * alpha).sin();
            data.push(x + noise_std * rng.normal());
            data.push(y + noise_std * rng.normal());
            labels.push(class);
        }
    }
    finish("complex_moons", 2, data, labels, 2)
}

/// Unit circle (class 0) around a circle of radius `factor` (class 1).
///
/// Panics unless `0 < factor < 1`.
pub fn gen_noisy_circles(
    n_samples: usize,
    noise_std: f64,
    factor: f64,
    rng: &mut RngState,
) -> Dataset {
    assert!(factor > 0.0 && factor < 1.0, "circle factor must lie in (0, 1)");
    let n_outer = n_samples.div_ceil(2);
    let n_inner = n_samples / 2;
    let mut data = Vec::with_capacity(n_samples * 2);
    let mut labels = Vec::with_capacity(n_samples);
    for (class, count, radius) in [(0usize, n_outer, 1.0), (1, n_inner, factor)] {
        for i in 0..count {
            let phi = 2.0 * PI * i as f64 / count as f64;
            data.push(radius * phi.cos() + noise_std * rng.normal());
            data.push(radius * phi.sin() + noise_std * rng.normal());
            labels.push(class);
        }
    }
    finish("noisy_circles", 2, data, labels, 2)
}

/// Ring centers; consecutive centers differ by 1 along x, then along z.
pub const RING_CENTERS: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 0.0, 1.0]];

/// Orthonormal pair spanning each ring's plane: xy, xz and yz.
pub const RING_PLANES: [[[f64; 3]; 2]; 3] = [
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
    [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
    [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
];

/// Three unit rings in mutually orthogonal planes, chained so that each
/// passes through the center of the next, plus isotropic noise.
pub fn gen_interlocking_rings(n_per_class: usize, noise_std: f64, rng: &mut RngState) -> Dataset {
    let mut data = Vec::with_capacity(3 * n_per_class * 3);
    let mut labels = Vec::with_capacity(3 * n_per_class);
    for k in 0..3 {
        let [u, v] = RING_PLANES[k];
        let c = RING_CENTERS[k];
        for i in 0..n_per_class {
            let phi = 2.0 * PI * i as f64 / n_per_class as f64;
            let (cos, sin) = (phi.cos(), phi.sin());
            for d in 0..3 {
                data.push(c[d] + cos * u[d] + sin * v[d] + noise_std * rng.normal());
            }
            labels.push(k);
        }
    }
    finish("interlocking_rings", 3, data, labels, 3)
}

fn finish(name: &str, cols: usize, data: Vec<f64>, labels: Vec<usize>, n_classes: usize) -> Dataset {
    let x = Matrix::from_vec(labels.len(), cols, data).expect("generator sized its buffer");
    Dataset::new(name, x, labels, n_classes).expect("generated data is well formed")
}
