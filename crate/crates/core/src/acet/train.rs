//! Training loops: the standard one-hot baseline and ACET.
//!
//! Both loops share one epoch routine. ACET walks the target time through
//! `dt, 2·dt, …, 1`, spending up to `epochs_per_increment` epochs at each
//! value, and skips the update of any batch already inside the equilibrium
//! set `L < ε`. Once `t = 1` it keeps training on one-hot targets until the
//! epoch budget or early stopping ends the run.

use std::time::Instant;

use crate::acet::config::{Method, TrainConfig};
use crate::acet::gate::EquilibriumGate;
use crate::acet::history::{EpochRecord, IncrementCheck, RunHistory, StopReason};
use crate::acet::schedule::{loss_jump_bound, TargetSchedule};
use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::nncore::loss::{accuracy, cross_entropy_unchecked, one_hot};
use crate::nncore::{Matrix, Mlp, RngState};
use crate::optim::{AdamHyper, AdamState, LrSchedule};

/// Rows per chunk when evaluating a whole dataset.
const EVAL_CHUNK: usize = 2048;

/// Plain mini-batch Adam against fixed targets (`t ≡ 1`, or smoothed when
/// `label_smoothing_alpha` is set).
pub fn train_standard(
    model: Mlp,
    train: &Dataset,
    test: &Dataset,
    config: &TrainConfig,
    rng: &mut RngState,
) -> Result<(Mlp, RunHistory)> {
    if config.method != Method::Standard {
        return Err(Error::Config("train_standard needs method = st".into()));
    }
    let mut run = Run::new(model, train, test, config, rng)?;
    let target_t = 1.0 - config.label_smoothing_alpha.unwrap_or(0.0);
    while run.history.epochs() < config.max_epochs {
        let epoch = run.epoch(target_t, None)?;
        if run.record(epoch, 1.0) {
            break;
        }
    }
    Ok(run.finish())
}

/// Progressive-target training with equilibrium-gated updates.
pub fn train_acet(
    model: Mlp,
    train: &Dataset,
    test: &Dataset,
    config: &TrainConfig,
    rng: &mut RngState,
) -> Result<(Mlp, RunHistory)> {
    if config.method != Method::Acet {
        return Err(Error::Config("train_acet needs method = acet".into()));
    }
    let mut run = Run::new(model, train, test, config, rng)?;
    let gate = config.gate()?;

    let mut t_prev = 0.0;
    'ramp: for t in run.schedule.increment_times() {
        if run.history.epochs() >= config.max_epochs {
            break;
        }
        let check = run.increment_check(t_prev, t)?;
        run.history.increment_checks.push(check);
        t_prev = t;

        for _ in 0..config.epochs_per_increment {
            if run.history.epochs() >= config.max_epochs {
                break 'ramp;
            }
            let epoch = run.epoch(t, Some(gate))?;
            let settled = gate.in_equilibrium(epoch.train_loss);
            if run.record(epoch, t) {
                break 'ramp;
            }
            if settled {
                if t == 1.0 {
                    run.history.stop_reason = StopReason::Equilibrium;
                    break 'ramp;
                }
                continue 'ramp;
            }
        }
    }

    while run.history.epochs() < config.max_epochs
        && run.history.stop_reason == StopReason::EpochBudget
    {
        let epoch = run.epoch(1.0, Some(gate))?;
        let settled = gate.in_equilibrium(epoch.train_loss);
        if run.record(epoch, 1.0) {
            break;
        }
        if settled {
            run.history.stop_reason = StopReason::Equilibrium;
        }
    }
    Ok(run.finish())
}

/// Dispatches on `config.method`.
pub fn train(
    model: Mlp,
    train: &Dataset,
    test: &Dataset,
    config: &TrainConfig,
    rng: &mut RngState,
) -> Result<(Mlp, RunHistory)> {
    match config.method {
        Method::Standard => train_standard(model, train, test, config, rng),
        Method::Acet => train_acet(model, train, test, config, rng),
    }
}

/// Class probabilities for a whole dataset, evaluated in chunks.
pub fn predict_all(model: &Mlp, x: &Matrix) -> Result<Matrix> {
    let mut out = Vec::with_capacity(x.rows() * model.n_classes());
    let mut start = 0;
    while start < x.rows() {
        let end = (start + EVAL_CHUNK).min(x.rows());
        let idx: Vec<usize> = (start..end).collect();
        out.extend_from_slice(model.predict(&x.select_rows(&idx))?.as_slice());
        start = end;
    }
    Matrix::from_vec(x.rows(), model.n_classes(), out)
}

/// Loss against one-hot labels and accuracy over a whole dataset.
pub fn evaluate(model: &Mlp, data: &Dataset) -> Result<(f64, f64)> {
    let probs = predict_all(model, &data.x)?;
    let targets = one_hot(&data.labels, data.n_classes);
    if data.is_empty() {
        return Ok((0.0, 0.0));
    }
    Ok((
        cross_entropy_unchecked(&probs, &targets),
        accuracy(&probs, &data.labels),
    ))
}

struct EpochStats {
    train_loss: f64,
    train_acc: f64,
    wall_seconds: f64,
    performed: usize,
    skipped: usize,
}

/// Patience counter on test loss.
struct EarlyStopper {
    patience: Option<usize>,
    best: f64,
    since_best: usize,
}

impl EarlyStopper {
    fn observe(&mut self, loss: f64) -> bool {
        let Some(patience) = self.patience else {
            return false;
        };
        if loss < self.best {
            self.best = loss;
            self.since_best = 0;
        } else {
            self.since_best += 1;
        }
        self.since_best >= patience
    }
}

struct Run<'a> {
    model: Mlp,
    adam: AdamState,
    lr: LrSchedule,
    schedule: TargetSchedule,
    train: &'a Dataset,
    test: &'a Dataset,
    config: &'a TrainConfig,
    rng: &'a mut RngState,
    history: RunHistory,
    stopper: EarlyStopper,
    order: Vec<usize>,
}

impl<'a> Run<'a> {
    fn new(
        model: Mlp,
        train: &'a Dataset,
        test: &'a Dataset,
        config: &'a TrainConfig,
        rng: &'a mut RngState,
    ) -> Result<Self> {
        config.validate()?;
        for data in [train, test] {
            data.validate()?;
            if data.n_features() != model.n_inputs() || data.n_classes != model.n_classes() {
                return Err(Error::Dimension(format!(
                    "{} has {} features / {} classes, model maps {} -> {}",
                    data.name,
                    data.n_features(),
                    data.n_classes,
                    model.n_inputs(),
                    model.n_classes()
                )));
            }
        }
        if train.is_empty() {
            return Err(Error::Config("training set is empty".into()));
        }
        let schedule = match config.method {
            Method::Acet => config.schedule(train.n_classes)?,
            Method::Standard => TargetSchedule::new(train.n_classes, 1.0)?,
        };
        let adam = AdamState::new(&model, AdamHyper::with_lr(config.lr))?;
        let batches = train.len().div_ceil(config.batch_size);
        Ok(Self {
            model,
            adam,
            lr: config.lr_schedule(),
            schedule,
            train,
            test,
            config,
            rng,
            history: RunHistory::new(config.method, batches),
            stopper: EarlyStopper {
                patience: config.early_stopping_patience,
                best: f64::INFINITY,
                since_best: 0,
            },
            order: (0..train.len()).collect(),
        })
    }

    /// One pass over the shuffled training set with targets at `t`.
    fn epoch(&mut self, t: f64, gate: Option<EquilibriumGate>) -> Result<EpochStats> {
        let start = Instant::now();
        self.rng.shuffle(&mut self.order);

        let mut loss_sum = 0.0;
        let mut hits = 0usize;
        let mut performed = 0;
        let mut skipped = 0;
        for chunk in self.order.chunks(self.config.batch_size) {
            let xb = self.train.x.select_rows(chunk);
            let labels: Vec<usize> = chunk.iter().map(|&i| self.train.labels[i]).collect();
            let yb = self.schedule.targets(t, &labels)?;

            let (probs, cache) = self.model.forward(&xb)?;
            let loss = cross_entropy_unchecked(&probs, &yb);
            loss_sum += loss * chunk.len() as f64;
            hits += probs
                .argmax_rows()
                .iter()
                .zip(&labels)
                .filter(|(p, l)| p == l)
                .count();

            if gate.is_some_and(|g| g.in_equilibrium(loss)) {
                skipped += 1;
                continue;
            }
            let grads = self.model.backward_unchecked(&cache, &yb);
            let lr = self.lr.lr_at(self.adam.step_count());
            self.adam.step_with_lr(&mut self.model, &grads, lr)?;
            performed += 1;
        }

        let n = self.train.len() as f64;
        Ok(EpochStats {
            train_loss: loss_sum / n,
            train_acc: hits as f64 / n,
            // Whole microseconds, so the value survives the 9-digit CSV exactly.
            wall_seconds: if self.config.record_wall_time {
                start.elapsed().as_micros() as f64 * 1e-6
            } else {
                0.0
            },
            performed,
            skipped,
        })
    }

    /// Appends the epoch, evaluating on the test set. Returns true when
    /// early stopping fires.
    fn record(&mut self, stats: EpochStats, t: f64) -> bool {
        let (test_loss, test_acc) =
            evaluate(&self.model, self.test).expect("shapes validated at start");
        self.history.push(EpochRecord {
            epoch: self.history.epochs() + 1,
            t_value: t,
            train_loss: stats.train_loss,
            train_acc: stats.train_acc,
            test_loss,
            test_acc,
            epoch_wall_seconds: stats.wall_seconds,
            updates_performed: stats.performed,
            updates_skipped: stats.skipped,
        });
        // The ramp changes the objective; patience only counts at t = 1.
        if t == 1.0 && self.stopper.observe(test_loss) {
            self.history.stopped_early = true;
            self.history.stop_reason = StopReason::EarlyStopping;
            return true;
        }
        false
    }

    fn increment_check(&self, t_from: f64, t_to: f64) -> Result<IncrementCheck> {
        let probs = predict_all(&self.model, &self.train.x)?;
        let before = self.schedule.targets(t_from, &self.train.labels)?;
        let after = self.schedule.targets(t_to, &self.train.labels)?;
        let measured_jump =
            cross_entropy_unchecked(&probs, &after) - cross_entropy_unchecked(&probs, &before);
        Ok(IncrementCheck {
            t_from,
            t_to,
            measured_jump,
            bound: loss_jump_bound(&probs, &self.schedule, t_to - t_from),
        })
    }

    fn finish(self) -> (Mlp, RunHistory) {
        (self.model, self.history)
    }
}
