//! Per-method means across seeds, and the ACET-vs-standard deltas.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::acet::Method;
use crate::error::{Error, Result};

/// The two numbers each seed contributes to a summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub method: Method,
    pub best_test_acc: f64,
    pub total_wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub method: Method,
    pub mean_acc: f64,
    /// Sample standard deviation (n − 1); zero for a single seed.
    pub std_acc: f64,
    pub mean_time_s: f64,
    pub seeds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub dataset: String,
    /// ACET mean accuracy minus standard mean accuracy.
    pub acc_delta: f64,
    /// ACET mean time over standard mean time.
    pub time_ratio: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// One summary row per method, ordered standard then ACET.
///
/// Every method must have been run on the same set of seeds.
pub fn aggregate(dataset: &str, outcomes: &[SeedOutcome]) -> Result<Vec<SummaryRow>> {
    if outcomes.is_empty() {
        return Err(Error::Consistency("nothing to aggregate".into()));
    }
    let mut by_method: BTreeMap<Method, Vec<&SeedOutcome>> = BTreeMap::new();
    for o in outcomes {
        by_method.entry(o.method).or_default().push(o);
    }
    let seed_sets: Vec<BTreeSet<u64>> = by_method
        .values()
        .map(|v| v.iter().map(|o| o.seed).collect())
        .collect();
    for (method, runs) in &by_method {
        let distinct: BTreeSet<u64> = runs.iter().map(|o| o.seed).collect();
        if distinct.len() != runs.len() {
            return Err(Error::Consistency(format!("{method}: a seed appears twice")));
        }
    }
    if seed_sets.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Consistency(
            "methods were run on different seed sets".into(),
        ));
    }

    Ok(by_method
        .into_iter()
        .map(|(method, runs)| {
            let accs: Vec<f64> = runs.iter().map(|o| o.best_test_acc).collect();
            let times: Vec<f64> = runs.iter().map(|o| o.total_wall_seconds).collect();
            SummaryRow {
                dataset: dataset.to_string(),
                method,
                mean_acc: mean(&accs),
                std_acc: sample_std(&accs),
                mean_time_s: mean(&times),
                seeds: runs.len(),
            }
        })
        .collect())
}

/// ACET relative to standard training, if both are present.
pub fn compare(rows: &[SummaryRow]) -> Option<Comparison> {
    let st = rows.iter().find(|r| r.method == Method::Standard)?;
    let acet = rows.iter().find(|r| r.method == Method::Acet)?;
    let time_ratio = if st.mean_time_s == acet.mean_time_s {
        1.0
    } else {
        acet.mean_time_s / st.mean_time_s
    };
    Some(Comparison {
        dataset: st.dataset.clone(),
        acc_delta: acet.mean_acc - st.mean_acc,
        time_ratio,
    })
}
