//! Acceptance criteria 1-13, one PASS/FAIL/SKIP line each.
//!
//! MNIST (criterion 12) runs only when `ACET_MNIST_DIR` points at a
//! directory holding the four standard IDX files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use acet_lab::acet::{derivative_bound_inf, train_acet, Method, RunHistory, StopReason, TargetSchedule};
use acet_lab::datasets::Dataset;
use acet_lab::harness::bench::{mnist_spec_in, run_bench, synthetic_spec, synthetic_specs};
use acet_lab::harness::{run_experiment, ExperimentReport, ExperimentSpec};
use acet_lab::nncore::{Matrix, Mlp, RngState, Stream};
use rand::Rng;

// Reference test accuracies for the spiral benchmark, in percent.
const SPIRAL_ST: f64 = 87.50;
const SPIRAL_ACET: f64 = 87.67;

enum Outcome {
    Pass,
    Fail,
    Skip,
}

struct Line {
    id: u32,
    name: &'static str,
    outcome: Outcome,
    detail: String,
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

// Oracles. Written from the definitions, independently of the library code.

fn oracle_target(t: f64, c: usize, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| t * if j == c { 1.0 } else { 0.0 } + (1.0 - t) / n as f64)
        .collect()
}

fn oracle_ce(probs: &Matrix, targets: &Matrix) -> f64 {
    let mut total = 0.0;
    for r in 0..probs.rows() {
        for c in 0..probs.cols() {
            total -= targets.get(r, c) * probs.get(r, c).max(1e-12).ln();
        }
    }
    total / probs.rows() as f64
}

fn oracle_softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|z| (z - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

fn random_matrix(rows: usize, cols: usize, rng: &mut RngState) -> Matrix {
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.normal()).collect()).unwrap()
}

fn random_stochastic(rows: usize, cols: usize, rng: &mut RngState) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        let raw: Vec<f64> = (0..cols).map(|_| rng.random_range(0.0..1.0) + 1e-3).collect();
        let s: f64 = raw.iter().sum();
        for (c, v) in raw.into_iter().enumerate() {
            m.set(r, c, v / s);
        }
    }
    m
}

// 1
fn schedule_suite() -> Line {
    let start = Instant::now();
    let mut rng = RngState::new(101);
    let mut problems = Vec::new();
    let mut max_sum: f64 = 0.0;
    let mut max_lin: f64 = 0.0;
    for n in [2usize, 3, 10] {
        let s = TargetSchedule::new(n, 0.1).unwrap();
        for c in 0..n {
            if s.target_vector(0.0, c).unwrap() != vec![1.0 / n as f64; n] {
                problems.push(format!("n={n}: y(0) not exactly uniform"));
            }
            let one_hot: Vec<f64> = (0..n).map(|j| if j == c { 1.0 } else { 0.0 }).collect();
            if s.target_vector(1.0, c).unwrap() != one_hot {
                problems.push(format!("n={n}: y(1) not exactly one-hot"));
            }
        }
        for _ in 0..1000 {
            let c = rng.random_range(0..n);
            let (a, b): (f64, f64) = (rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0));
            let (t1, t2) = if a <= b { (a, b) } else { (b, a) };
            let y1 = s.target_vector(t1, c).unwrap();
            let y2 = s.target_vector(t2, c).unwrap();
            max_sum = max_sum.max((y1.iter().sum::<f64>() - 1.0).abs());
            let o = oracle_target(t1, c, n);
            if y1.iter().zip(&o).any(|(x, y)| (x - y).abs() > 1e-12) {
                problems.push(format!("n={n}: y({t1}) differs from the closed form"));
            }
            for j in 0..n {
                let emerging = j == c;
                if (emerging && y2[j] < y1[j]) || (!emerging && y2[j] > y1[j]) {
                    problems.push(format!("n={n}: component {j} moved the wrong way"));
                }
                // Exact derivative of a linear map: one-hot minus uniform.
                let d = if emerging { 1.0 } else { 0.0 } - 1.0 / n as f64;
                max_lin = max_lin.max((y2[j] - y1[j] - (t2 - t1) * d).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = problems.is_empty() && max_sum <= 1e-12 && max_lin <= 1e-12 && secs < 1.0;
    Line {
        id: 1,
        name: "schedule suite",
        outcome: verdict(ok),
        detail: format!(
            "max |sum-1| {max_sum:.1e}, linearity residual {max_lin:.1e}, {} issues, {secs:.3} s{}",
            problems.len(),
            problems.first().map(|p| format!(" ({p})")).unwrap_or_default()
        ),
    }
}

// 2
fn norm_bound() -> Line {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [2usize, 3, 10] {
        let s = TargetSchedule::new(n, 0.1).unwrap();
        let expected = 1.0 - 1.0 / n as f64;
        worst = worst.max((derivative_bound_inf(n).unwrap() - expected).abs());
        for c in 0..n {
            // ||y* - 1/n||_inf from the definition.
            let norm = (0..n)
                .map(|j| (if j == c { 1.0 } else { 0.0 } - 1.0 / n as f64).abs())
                .fold(0.0, f64::max);
            let lib = s.target_derivative(c).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            worst = worst.max((norm - expected).abs()).max((lib - expected).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Line {
        id: 2,
        name: "derivative norm bound",
        outcome: verdict(worst <= 1e-12 && secs < 1.0),
        detail: format!("max deviation from 1-1/n {worst:.1e}, {secs:.3} s"),
    }
}

/// Central-difference gradient of the oracle loss, parameter order: each
/// layer's weights then biases.
fn numeric_gradient(model: &Mlp, x: &Matrix, y: &Matrix, h: f64) -> Vec<f64> {
    let mut probe = model.clone();
    let mut out = Vec::new();
    for li in 0..model.layers().len() {
        let nw = model.layers()[li].weights.as_slice().len();
        let nb = model.layers()[li].biases.len();
        for j in 0..nw + nb {
            let set = |m: &mut Mlp, delta: f64| {
                let layer = &mut m.layers_mut()[li];
                if j < nw {
                    layer.weights.as_mut_slice()[j] += delta;
                } else {
                    layer.biases[j - nw] += delta;
                }
            };
            set(&mut probe, h);
            let plus = oracle_ce(&probe.predict(x).unwrap(), y);
            set(&mut probe, -2.0 * h);
            let minus = oracle_ce(&probe.predict(x).unwrap(), y);
            set(&mut probe, h);
            out.push((plus - minus) / (2.0 * h));
        }
    }
    out
}

// 3
fn gradient_check() -> Line {
    let start = Instant::now();
    let mut rng = RngState::new(303);
    let mut worst: f64 = 0.0;
    for widths in [vec![2, 5, 3], vec![3, 16, 16, 3]] {
        let model = Mlp::init(&widths, &mut rng).unwrap();
        let x = random_matrix(8, widths[0], &mut rng);
        let y = random_stochastic(8, *widths.last().unwrap(), &mut rng);
        let (_, cache) = model.forward(&x).unwrap();
        let analytic = model.backward(&cache, &y).unwrap().flat();
        let numeric = numeric_gradient(&model, &x, &y, 1e-5);
        assert_eq!(analytic.len(), numeric.len());
        for (a, n) in analytic.iter().zip(&numeric) {
            worst = worst.max((a - n).abs() / a.abs().max(n.abs()).max(1e-8));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Line {
        id: 3,
        name: "gradient check",
        outcome: verdict(worst < 1e-4 && secs < 5.0),
        detail: format!("max relative error {worst:.2e} (< 1e-4), {secs:.3} s"),
    }
}

// 4
fn output_gradient() -> Line {
    let mut rng = RngState::new(404);
    let model = Mlp::init(&[3, 9, 4], &mut rng).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let batch = 1 + i % 12;
        let x = random_matrix(batch, 3, &mut rng);
        let y = random_stochastic(batch, 4, &mut rng);
        let (_, cache) = model.forward(&x).unwrap();
        let g = model.backward(&cache, &y).unwrap();
        // Probabilities recomputed by hand from the last layer's inputs.
        let hidden = cache.activations()[cache.activations().len() - 2].clone();
        let last = &model.layers()[1];
        for r in 0..batch {
            let logits: Vec<f64> = (0..4)
                .map(|c| {
                    last.biases[c] + (0..hidden.cols()).map(|k| hidden.get(r, k) * last.weights.get(k, c)).sum::<f64>()
                })
                .collect();
            let p = oracle_softmax(&logits);
            for (c, pc) in p.iter().enumerate() {
                let expected = (pc - y.get(r, c)) / batch as f64;
                worst = worst.max((g.logits.get(r, c) - expected).abs());
            }
        }
    }
    Line {
        id: 4,
        name: "output-gradient identity",
        outcome: verdict(worst <= 1e-10),
        detail: format!("max |dL/dz - (p-y)/B| {worst:.1e} over 100 targets"),
    }
}

fn spiral_seed0() -> (Dataset, Dataset, Mlp, ExperimentSpec) {
    let spec = synthetic_spec("spiral", Path::new("unused")).unwrap();
    let (tr, te) = spec.datasets(0).unwrap();
    let init = spec.initial_model(0).unwrap();
    (tr, te, init, spec)
}

// 5
fn gating() -> Line {
    let (tr, te, init, spec) = spiral_seed0();
    let run = |eps: f64| {
        let mut cfg = spec.config_for(Method::Acet, 0);
        cfg.epsilon = eps;
        train_acet(init.clone(), &tr, &te, &cfg, &mut RngState::for_stream(0, Stream::Shuffle)).unwrap()
    };
    let (frozen, h_big) = run(10.0);
    let bit_identical = frozen
        .flat_params()
        .iter()
        .zip(init.flat_params())
        .all(|(a, b)| a.to_bits() == b.to_bits());
    let (_, h_tiny) = run(1e-12);
    let all_update = h_tiny.total_skipped() == 0
        && h_tiny.total_updates() == h_tiny.epochs() * h_tiny.batches_per_epoch;
    Line {
        id: 5,
        name: "gating soundness",
        outcome: verdict(h_big.total_updates() == 0 && bit_identical && all_update),
        detail: format!(
            "eps=10: {} updates, params bit-identical {bit_identical}; eps=1e-12: {}/{} batches updated",
            h_big.total_updates(),
            h_tiny.total_updates(),
            h_tiny.epochs() * h_tiny.batches_per_epoch
        ),
    }
}

// 6
fn loss_jump(spiral: &ExperimentReport) -> Line {
    let acet: Vec<&RunHistory> = spiral
        .runs
        .iter()
        .filter(|r| r.method == Method::Acet)
        .map(|r| &r.history)
        .collect();
    let checks: usize = acet.iter().map(|h| h.increment_checks.len()).sum();
    let violations: usize = acet
        .iter()
        .flat_map(|h| &h.increment_checks)
        .filter(|c| c.measured_jump.abs() > c.bound)
        .count();
    let every_boundary = acet.iter().all(|h| h.increment_checks.len() == 10);
    Line {
        id: 6,
        name: "loss-jump bound",
        outcome: verdict(acet.len() >= 10 && violations == 0 && every_boundary),
        detail: format!("{violations} violations in {checks} boundaries over {} seeds", acet.len()),
    }
}

fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect()
}

fn without_wall_column(csv: &[u8]) -> String {
    String::from_utf8_lossy(csv)
        .lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            if f.len() == 9 {
                f.remove(6);
            }
            f.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

// 7
fn determinism(root: &Path) -> Line {
    let mut spec = synthetic_spec("spiral", root).unwrap();
    spec.seeds = vec![7];
    spec.save_models = true;
    let mut outputs = Vec::new();
    for (tag, timing) in [("a", false), ("b", false), ("c", true), ("d", true)] {
        spec.output_dir = root.join(tag);
        spec.train.record_wall_time = timing;
        run_experiment(&spec).unwrap();
        outputs.push(read_dir_bytes(&spec.output_dir));
    }
    let byte_identical = outputs[0] == outputs[1] && !outputs[0].is_empty();
    let histories_agree = outputs[2]
        .iter()
        .filter(|(name, _)| name.contains("_seed"))
        .all(|(name, bytes)| without_wall_column(bytes) == without_wall_column(&outputs[3][name]));
    Line {
        id: 7,
        name: "determinism",
        outcome: verdict(byte_identical && histories_agree),
        detail: format!(
            "{} files byte-identical with timing off: {byte_identical}; timed runs equal outside wall_s: {histories_agree}",
            outputs[0].len()
        ),
    }
}

fn acc(report: &ExperimentReport, method: Method) -> f64 {
    100.0 * report.summary_for(method).unwrap().mean_acc
}

// 8
fn spiral_accuracy(spiral: &ExperimentReport, seconds: f64) -> Line {
    let (st, acet) = (acc(spiral, Method::Standard), acc(spiral, Method::Acet));
    let seeds = spiral.summary[0].seeds;
    let ok = seeds >= 10 && (st - SPIRAL_ST).abs() <= 3.0 && (acet - SPIRAL_ACET).abs() <= 3.0 && seconds < 120.0;
    Line {
        id: 8,
        name: "spiral accuracy",
        outcome: verdict(ok),
        detail: format!(
            "st {st:.2}% (target {SPIRAL_ST} +-3), acet {acet:.2}% (target {SPIRAL_ACET} +-3), {seeds} seeds, {seconds:.1} s"
        ),
    }
}

fn direction(id: u32, name: &'static str, r: &ExperimentReport) -> Line {
    let (st, acet) = (acc(r, Method::Standard), acc(r, Method::Acet));
    let seeds = r.summary[0].seeds;
    Line {
        id,
        name,
        outcome: verdict(seeds >= 10 && acet >= st - 0.5),
        detail: format!("st {st:.2}%, acet {acet:.2}%, delta {:+.2} points, {seeds} seeds", acet - st),
    }
}

// 11
fn timing(reports: &[ExperimentReport]) -> Line {
    let mut faster = 0;
    let mut parts = Vec::new();
    for r in reports {
        let total = |m: Method| {
            r.runs
                .iter()
                .filter(|s| s.method == m)
                .map(|s| s.history.total_wall_seconds)
                .sum::<f64>()
        };
        let (st, acet) = (total(Method::Standard), total(Method::Acet));
        let skipped: usize = r.runs.iter().map(|s| s.history.total_skipped()).sum();
        if acet <= st {
            faster += 1;
        }
        parts.push(format!("{} {:.2}/{:.2} s ({skipped} skipped)", r.name, acet, st));
    }
    Line {
        id: 11,
        name: "timing direction",
        outcome: verdict(faster >= 3),
        detail: format!("acet <= st on {faster}/4 (acet/st: {})", parts.join(", ")),
    }
}

// 12
fn mnist(root: &Path) -> Line {
    let Some(dir) = std::env::var_os("ACET_MNIST_DIR").map(PathBuf::from) else {
        return Line {
            id: 12,
            name: "mnist",
            outcome: Outcome::Skip,
            detail: "set ACET_MNIST_DIR to the IDX directory to run".into(),
        };
    };
    let spec = mnist_spec_in(&dir, root);
    let report = run_experiment(&spec).unwrap();
    let epochs_ok = report.runs.iter().all(|r| r.history.epochs() <= 20);
    let (st, acet) = (acc(&report, Method::Standard), acc(&report, Method::Acet));
    Line {
        id: 12,
        name: "mnist",
        outcome: verdict(epochs_ok && st >= 97.5 && acet >= 97.5),
        detail: format!("st {st:.2}%, acet {acet:.2}% (>= 97.5 within 20 epochs)"),
    }
}

/// Replays the patience rule on a history and reports whether training
/// stopped exactly when it should have.
fn patience_respected(h: &RunHistory, patience: usize) -> bool {
    let mut best = f64::INFINITY;
    let mut since = 0;
    let mut should_stop_at = None;
    for r in h.records.iter().filter(|r| r.t_value == 1.0) {
        if r.test_loss < best {
            best = r.test_loss;
            since = 0;
        } else {
            since += 1;
        }
        if since >= patience {
            should_stop_at = Some(r.epoch);
            break;
        }
    }
    let best_acc = h.records.iter().map(|r| r.test_acc).fold(0.0, f64::max);
    let stopped_right = match should_stop_at {
        Some(e) => h.stop_reason == StopReason::EarlyStopping && h.epochs() == e,
        None => h.stop_reason != StopReason::EarlyStopping,
    };
    stopped_right && h.best_test_acc == best_acc
}

// 13
fn early_stopping(reports: &[ExperimentReport]) -> Line {
    let mut runs = 0;
    let mut stopped = 0;
    let mut best_not_last = 0;
    let mut bad = 0;
    for r in reports {
        for s in &r.runs {
            let p = patience_of(r);
            runs += 1;
            if s.history.stopped_early {
                stopped += 1;
            }
            if s.history.last().unwrap().test_acc < s.history.best_test_acc {
                best_not_last += 1;
            }
            if !patience_respected(&s.history, p) {
                bad += 1;
            }
        }
    }
    Line {
        id: 13,
        name: "early stopping (melanoma excluded)",
        outcome: verdict(bad == 0 && stopped > 0),
        detail: format!(
            "{runs} runs, {stopped} stopped early, {bad} patience violations, best epoch earlier than last in {best_not_last}"
        ),
    }
}

fn patience_of(r: &ExperimentReport) -> usize {
    synthetic_spec(&r.name, Path::new("unused"))
        .and_then(|s| s.train.early_stopping_patience)
        .expect("benchmarks use early stopping")
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    let mut lines = vec![schedule_suite(), norm_bound(), gradient_check(), output_gradient(), gating()];

    let specs = synthetic_specs(&root.join("bench"));
    let mut reports = Vec::new();
    let mut spiral_seconds = 0.0;
    for spec in &specs {
        let start = Instant::now();
        let mut r = run_bench(std::slice::from_ref(spec), &root.join("bench"), |_, _| {}).unwrap();
        if spec.name == "spiral" {
            spiral_seconds = start.elapsed().as_secs_f64();
        }
        reports.push(r.remove(0));
    }
    let by_name = |n: &str| reports.iter().find(|r| r.name == n).unwrap();

    lines.push(loss_jump(by_name("spiral")));
    lines.push(determinism(&root.join("det")));
    lines.push(spiral_accuracy(by_name("spiral"), spiral_seconds));
    lines.push(direction(9, "noisy circles direction", by_name("noisy_circles")));
    lines.push(direction(10, "interlocking rings direction", by_name("interlocking_rings")));
    lines.push(timing(&reports));
    lines.push(mnist(&root.join("mnist")));
    lines.push(early_stopping(&reports));

    let mut failed = 0;
    for l in &lines {
        let tag = match l.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => {
                failed += 1;
                "FAIL"
            }
            Outcome::Skip => "SKIP",
        };
        println!("criterion {:>2} {tag} {}: {}", l.id, l.name, l.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
