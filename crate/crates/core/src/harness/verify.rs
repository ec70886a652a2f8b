//! Self-checks runnable from a release build: schedule algebra, gradients,
//! gating, the loss-jump bound and run determinism.

use std::fmt;

use rand::Rng;

use crate::acet::{derivative_bound_inf, train, Method, TargetSchedule, TrainConfig};
use crate::datasets::{train_test_gen, GeneratorSpec};
use crate::error::Result;
use crate::nncore::{grad_check_max_rel_err, Matrix, Mlp, RngState};

pub const GRAD_CHECK_H: f64 = 1e-5;
pub const GRAD_CHECK_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub max_grad_err: f64,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// Random row-stochastic matrix with strictly positive entries.
pub fn random_stochastic(rows: usize, cols: usize, rng: &mut RngState) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        let row = m.row_mut(r);
        for v in row.iter_mut() {
            *v = rng.random_range(0.01..1.0);
        }
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= s);
    }
    m
}

pub fn random_inputs(rows: usize, cols: usize, rng: &mut RngState) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.normal()).collect();
    Matrix::from_vec(rows, cols, data).expect("sized")
}

fn schedule_check(rng: &mut RngState) -> Result<Check> {
    let mut worst_sum: f64 = 0.0;
    let mut worst_lin: f64 = 0.0;
    let mut failures = Vec::new();
    for n in [2usize, 3, 10] {
        let s = TargetSchedule::new(n, 0.1)?;
        for c in 0..n {
            let start = s.target_vector(0.0, c)?;
            let end = s.target_vector(1.0, c)?;
            if start.iter().any(|&v| v != 1.0 / n as f64) {
                failures.push(format!("n={n} c={c}: y(0) not uniform"));
            }
            if end.iter().enumerate().any(|(j, &v)| v != if j == c { 1.0 } else { 0.0 }) {
                failures.push(format!("n={n} c={c}: y(1) not one-hot"));
            }
        }
        for _ in 0..1000 {
            let t: f64 = rng.random_range(0.0..=1.0);
            let u: f64 = rng.random_range(0.0..=1.0);
            let c = rng.random_range(0..n);
            let y = s.target_vector(t, c)?;
            worst_sum = worst_sum.max((y.iter().sum::<f64>() - 1.0).abs());
            let (lo, hi) = if t <= u { (t, u) } else { (u, t) };
            let (a, b) = (s.target_vector(lo, c)?, s.target_vector(hi, c)?);
            if b[c] < a[c] {
                failures.push(format!("n={n}: true-class mass fell from t={lo} to t={hi}"));
            }
            let d = s.target_derivative(c);
            for j in 0..n {
                worst_lin = worst_lin.max((b[j] - a[j] - (hi - lo) * d[j]).abs());
            }
        }
    }
    let passed = failures.is_empty() && worst_sum <= 1e-12 && worst_lin <= 1e-12;
    let mut detail = format!("max |sum-1| {worst_sum:.2e}, max linearity residual {worst_lin:.2e}");
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; {f}"));
    }
    Ok(check("schedule", passed, detail))
}

fn norm_bound_check() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in [2usize, 3, 10] {
        let s = TargetSchedule::new(n, 0.1)?;
        let k = derivative_bound_inf(n)?;
        for c in 0..n {
            let norm = s
                .target_derivative(c)
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            worst = worst.max((norm - k).abs()).max((k - (1.0 - 1.0 / n as f64)).abs());
        }
    }
    Ok(check("derivative bound", worst <= 1e-12, format!("max deviation {worst:.2e}")))
}

fn grad_check(rng: &mut RngState) -> Result<(Check, f64)> {
    let mut worst: f64 = 0.0;
    for widths in [vec![2, 5, 3], vec![3, 16, 16, 3]] {
        let model = Mlp::init(&widths, rng)?;
        let x = random_inputs(8, widths[0], rng);
        let y = random_stochastic(8, *widths.last().unwrap(), rng);
        worst = worst.max(grad_check_max_rel_err(&model, &x, &y, GRAD_CHECK_H)?);
    }
    Ok((
        check("gradient check", worst < GRAD_CHECK_TOL, format!("max relative error {worst:.3e}")),
        worst,
    ))
}

fn output_gradient_check(rng: &mut RngState) -> Result<Check> {
    let model = Mlp::init(&[4, 7, 5], rng)?;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let batch = rng.random_range(1..=16);
        let x = random_inputs(batch, 4, rng);
        let y = random_stochastic(batch, 5, rng);
        let (probs, cache) = model.forward(&x)?;
        let g = model.backward(&cache, &y)?;
        for r in 0..batch {
            for c in 0..5 {
                let expected = (probs.get(r, c) - y.get(r, c)) / batch as f64;
                worst = worst.max((g.logits.get(r, c) - expected).abs());
            }
        }
    }
    Ok(check("output gradient", worst <= 1e-10, format!("max deviation {worst:.2e}")))
}

fn small_spiral() -> GeneratorSpec {
    GeneratorSpec::Spiral { noise_std: 0.2 }
}

fn quick_config(epsilon: f64, seed: u64) -> TrainConfig {
    TrainConfig {
        method: Method::Acet,
        epsilon,
        epochs_per_increment: 1,
        max_epochs: 12,
        batch_size: 16,
        seed,
        record_wall_time: false,
        ..TrainConfig::default()
    }
}

fn quick_run(config: &TrainConfig) -> Result<(Mlp, Mlp, crate::acet::RunHistory)> {
    let (tr, te) = train_test_gen(&small_spiral(), 90, 90, config.seed)?;
    let init = Mlp::init(&[2, 16, 3], &mut RngState::new(config.seed))?;
    let (model, history) = train(init.clone(), &tr, &te, config, &mut RngState::new(config.seed + 1))?;
    Ok((init, model, history))
}

fn gate_check() -> Result<Check> {
    let (init, model, h) = quick_run(&quick_config(10.0, 3))?;
    let frozen = h.total_updates() == 0 && model.flat_params() == init.flat_params();
    let (_, _, h2) = quick_run(&quick_config(1e-12, 3))?;
    let all = h2.total_skipped() == 0 && h2.total_updates() == h2.epochs() * h2.batches_per_epoch;
    Ok(check(
        "equilibrium gate",
        frozen && all,
        format!(
            "eps=10: {} updates; eps=1e-12: {} skipped",
            h.total_updates(),
            h2.total_skipped()
        ),
    ))
}

fn jump_check() -> Result<Check> {
    let (_, _, h) = quick_run(&quick_config(1e-5, 4))?;
    let violations = h.increment_checks.iter().filter(|c| !c.holds()).count();
    let invariants = h.check_invariants();
    Ok(check(
        "loss-jump bound",
        violations == 0 && invariants.is_ok(),
        format!(
            "{violations} violations over {} increments{}",
            h.increment_checks.len(),
            invariants.err().map(|e| format!("; {e}")).unwrap_or_default()
        ),
    ))
}

fn determinism_check() -> Result<Check> {
    let cfg = quick_config(1e-5, 5);
    let (_, a, ha) = quick_run(&cfg)?;
    let (_, b, hb) = quick_run(&cfg)?;
    let same = a.flat_params() == b.flat_params() && ha.records == hb.records;
    Ok(check("determinism", same, "two identical runs compared".into()))
}

/// Runs every check. Fails only on internal errors; failed checks are
/// reported in the result.
pub fn run_verify() -> Result<VerifyReport> {
    let mut rng = RngState::new(0x5EED);
    let (grad, max_grad_err) = grad_check(&mut rng)?;
    let checks = vec![
        schedule_check(&mut rng)?,
        norm_bound_check()?,
        grad,
        output_gradient_check(&mut rng)?,
        gate_check()?,
        jump_check()?,
        determinism_check()?,
    ];
    Ok(VerifyReport {
        checks,
        max_grad_err,
    })
}
