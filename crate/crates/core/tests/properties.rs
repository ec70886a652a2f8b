use acet_lab::acet::{loss_jump_bound, EpochRecord, TargetSchedule};
use acet_lab::datasets::GeneratorSpec;
use acet_lab::harness::checkpoint::{decode_model, encode_model};
use acet_lab::harness::report::{fmt_sig9, read_history_csv, write_records_csv};
use acet_lab::nncore::{cross_entropy, softmax_rows, Matrix, Mlp, RngState};
use acet_lab::optim::{AdamHyper, AdamState};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, range: f64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-range..range, rows * cols).prop_map(move |d| Matrix::from_vec(rows, cols, d).unwrap())
}

fn stochastic(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(1e-3..1.0f64, rows * cols).prop_map(move |mut d| {
        for r in d.chunks_mut(cols) {
            let s: f64 = r.iter().sum();
            r.iter_mut().for_each(|v| *v /= s);
        }
        Matrix::from_vec(rows, cols, d).unwrap()
    })
}

fn naive_ce(p: &Matrix, y: &Matrix) -> f64 {
    let mut total = 0.0;
    for r in 0..p.rows() {
        for c in 0..p.cols() {
            total -= y.get(r, c) * p.get(r, c).max(1e-12).ln();
        }
    }
    total / p.rows() as f64
}

proptest! {
    #[test]
    fn targets_match_closed_form(n in 2usize..=12, t in 0.0..=1.0f64, c_seed in 0usize..1000) {
        let c = c_seed % n;
        let y = TargetSchedule::new(n, 0.1).unwrap().target_vector(t, c).unwrap();
        prop_assert!((y.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for (j, &v) in y.iter().enumerate() {
            let expected = t * f64::from(u8::from(j == c)) + (1.0 - t) / n as f64;
            prop_assert!((v - expected).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn true_class_mass_never_falls(n in 2usize..=10, a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let s = TargetSchedule::new(n, 0.1).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (y_lo, y_hi) = (s.target_vector(lo, 0).unwrap(), s.target_vector(hi, 0).unwrap());
        prop_assert!(y_hi[0] >= y_lo[0]);
        for j in 1..n {
            prop_assert!(y_hi[j] <= y_lo[j]);
        }
    }

    #[test]
    fn loss_jump_within_bound(probs_logits in matrix(6, 4, 8.0), labels in prop::collection::vec(0usize..4, 6), step in 0usize..10) {
        let s = TargetSchedule::new(4, 0.1).unwrap();
        let p = softmax_rows(&probs_logits);
        let times = s.increment_times();
        let t0 = if step == 0 { 0.0 } else { times[step - 1] };
        let t1 = times[step];
        let before = naive_ce(&p, &s.targets(t0, &labels).unwrap());
        let after = naive_ce(&p, &s.targets(t1, &labels).unwrap());
        prop_assert!((after - before).abs() <= loss_jump_bound(&p, &s, t1 - t0) + 1e-12);
    }

    #[test]
    fn softmax_is_stochastic_and_shift_invariant(z in matrix(5, 6, 50.0), shift in -100.0..100.0f64) {
        let p = softmax_rows(&z);
        let mut shifted = z.clone();
        shifted.as_mut_slice().iter_mut().for_each(|v| *v += shift);
        let q = softmax_rows(&shifted);
        for r in 0..5 {
            prop_assert!((p.row(r).iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(p.row(r).iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
        prop_assert!(p.max_abs_diff(&q) <= 1e-12);
    }

    #[test]
    fn cross_entropy_matches_definition(z in matrix(4, 3, 10.0), y in stochastic(4, 3)) {
        let p = softmax_rows(&z);
        let ce = cross_entropy(&p, &y).unwrap();
        prop_assert!(ce >= 0.0);
        prop_assert!((ce - naive_ce(&p, &y)).abs() <= 1e-12 * naive_ce(&p, &y).max(1.0));
    }

    #[test]
    fn logit_gradient_is_p_minus_y(seed in any::<u64>(), batch in 1usize..10, y in stochastic(9, 3)) {
        let model = Mlp::init(&[2, 6, 3], &mut RngState::new(seed)).unwrap();
        let mut rng = RngState::new(seed ^ 1);
        let x = Matrix::from_vec(batch, 2, (0..2 * batch).map(|_| rng.normal()).collect()).unwrap();
        let y = y.select_rows(&(0..batch).collect::<Vec<_>>());
        let (p, cache) = model.forward(&x).unwrap();
        let g = model.backward(&cache, &y).unwrap();
        for r in 0..batch {
            for c in 0..3 {
                prop_assert!((g.logits.get(r, c) - (p.get(r, c) - y.get(r, c)) / batch as f64).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn first_adam_step_is_bounded_by_lr(seed in any::<u64>(), lr in 1e-5..1e-1f64) {
        let mut model = Mlp::init(&[3, 4, 2], &mut RngState::new(seed)).unwrap();
        let before = model.flat_params();
        let x = Matrix::from_vec(2, 3, vec![0.3, -1.0, 2.0, 1.5, 0.2, -0.7]).unwrap();
        let (_, cache) = model.forward(&x).unwrap();
        let g = model.backward(&cache, &acet_lab::nncore::one_hot(&[0, 1], 2)).unwrap();
        let mut adam = AdamState::new(&model, AdamHyper::with_lr(lr)).unwrap();
        adam.step(&mut model, &g).unwrap();
        for (a, b) in model.flat_params().iter().zip(&before) {
            prop_assert!((a - b).abs() <= lr * (1.0 + 1e-9));
        }
    }

    #[test]
    fn matmul_matches_naive(a in matrix(3, 4, 5.0), b in matrix(4, 2, 5.0)) {
        let c = a.matmul(&b).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                let expected: f64 = (0..4).map(|k| a.get(i, k) * b.get(k, j)).sum();
                prop_assert!((c.get(i, j) - expected).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn sig9_round_trips(x in prop::num::f64::NORMAL | prop::num::f64::ZERO) {
        let s = fmt_sig9(x);
        let back: f64 = s.parse().unwrap();
        prop_assert_eq!(fmt_sig9(back), s.clone());
        prop_assert!((back - x).abs() <= 5e-9 * x.abs(), "{} -> {}", x, s);
    }

    #[test]
    fn history_csv_round_trips_bytes(rows in prop::collection::vec((0.0..5.0f64, 0.0..=1.0f64, 0.0..0.1f64, 0usize..50, 0usize..50), 0..20)) {
        let records: Vec<EpochRecord> = rows
            .iter()
            .enumerate()
            .map(|(i, &(loss, acc, wall, up, sk))| EpochRecord {
                epoch: i + 1,
                t_value: ((i + 1).min(10)) as f64 / 10.0,
                train_loss: loss,
                train_acc: acc,
                test_loss: loss * 1.1,
                test_acc: 1.0 - acc,
                epoch_wall_seconds: wall,
                updates_performed: up,
                updates_skipped: sk,
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        write_records_csv(&records, &a).unwrap();
        let parsed = read_history_csv(&a).unwrap();
        prop_assert_eq!(parsed.len(), records.len());
        write_records_csv(&parsed, &b).unwrap();
        prop_assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn checkpoints_round_trip(seed in any::<u64>(), hidden in prop::collection::vec(1usize..12, 0..3)) {
        let mut widths = vec![3];
        widths.extend(hidden);
        widths.push(4);
        let model = Mlp::init(&widths, &mut RngState::new(seed)).unwrap();
        let back = decode_model(&encode_model(&model)).unwrap();
        prop_assert_eq!(back.flat_params(), model.flat_params());
        prop_assert_eq!(back.widths(), widths);
    }

    #[test]
    fn generators_balance_classes(seed in any::<u64>(), k in 1usize..40, which in 0usize..4) {
        let spec = [
            GeneratorSpec::Spiral { noise_std: 0.2 },
            GeneratorSpec::ComplexMoons { noise_std: 0.1, warp: 0.3 },
            GeneratorSpec::NoisyCircles { noise_std: 0.1, factor: 0.5 },
            GeneratorSpec::InterlockingRings { noise_std: 0.1 },
        ][which];
        let n = k * spec.n_classes() + if spec.n_classes() == 2 { k % 2 } else { 0 };
        let d = spec.generate(n, &mut RngState::new(seed)).unwrap();
        prop_assert_eq!(d.len(), n);
        prop_assert!(d.x.is_finite());
        let counts = d.class_counts();
        prop_assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
    }
}
