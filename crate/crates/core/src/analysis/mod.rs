//! Per-group metrics, signed gaps, rank correlation and seed-ensemble bands.

pub mod fixtures;
mod spearman;
mod sweep;

use std::collections::BTreeMap;

use serde::Serialize;

pub use spearman::{average_ranks, spearman, SpearmanResult};
pub use sweep::{
    higher_prevalence_is_a, meta_correlation, sweep_correlations, RunRecord, SplitCorrelation,
    SweepSummary,
};

use crate::error::{Error, Result};
use crate::metrics::{auprc, auroc, Metric, ScoreSet};

/// Which class a group is missing, when its AUROC is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingClass {
    Positives,
    Negatives,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupMetrics {
    pub n: usize,
    pub n_pos: usize,
    pub prevalence: f64,
    pub auroc: Option<f64>,
    pub auprc: Option<f64>,
    pub missing: Option<MissingClass>,
}

impl GroupMetrics {
    pub fn of(s: &ScoreSet) -> Self {
        let missing = if s.n_pos() == 0 {
            Some(MissingClass::Positives)
        } else if s.n_neg() == 0 {
            Some(MissingClass::Negatives)
        } else {
            None
        };
        Self {
            n: s.len(),
            n_pos: s.n_pos(),
            prevalence: s.prevalence(),
            auroc: auroc(s).ok(),
            auprc: auprc(s).ok(),
            missing,
        }
    }

    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Auroc => self.auroc,
            Metric::Auprc => self.auprc,
        }
    }
}

/// Metrics on each group's restriction. Groups missing a class are flagged
/// through [`GroupMetrics::missing`] rather than failing the call.
pub fn per_group_metrics(s: &ScoreSet) -> Result<BTreeMap<u32, GroupMetrics>> {
    if s.groups().is_none() {
        return Err(Error::InvalidConfig("score set has no group tags".into()));
    }
    Ok(s.group_ids()
        .into_iter()
        .filter_map(|g| s.restrict_to_group(g).map(|sub| (g, GroupMetrics::of(&sub))))
        .collect())
}

/// Metric of the higher-prevalence group minus that of the lower-prevalence group.
pub fn signed_gap(metrics: &BTreeMap<u32, GroupMetrics>, metric: Metric) -> Result<f64> {
    if metrics.len() != 2 {
        return Err(Error::InvalidConfig(format!(
            "signed gap needs exactly two groups, got {}",
            metrics.len()
        )));
    }
    let mut it = metrics.iter();
    let (ga, a) = it.next().expect("two groups");
    let (gb, b) = it.next().expect("two groups");
    if a.prevalence == b.prevalence {
        return Err(Error::Undefined(format!(
            "groups {ga} and {gb} have equal prevalence {}",
            a.prevalence
        )));
    }
    let (hi, lo) = if a.prevalence > b.prevalence { (a, b) } else { (b, a) };
    match (hi.get(metric), lo.get(metric)) {
        (Some(h), Some(l)) => Ok(h - l),
        _ => Err(Error::Undefined(format!("{metric} missing for a group"))),
    }
}

/// Percentile with linear interpolation between order statistics of `sorted`.
pub fn percentile(sorted: &[f64], pct: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let rank = pct / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    sorted[lo] + (rank - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub lo: f64,
    pub mean: f64,
    pub hi: f64,
}

/// Per-step `(lo, mean, hi)` over seeds. `per_step[k]` holds the values of
/// every seed at step `k`.
pub fn percentile_band(per_step: &[Vec<f64>], lo_pct: f64, hi_pct: f64) -> Result<Vec<Band>> {
    if !(0.0..=100.0).contains(&lo_pct) || !(lo_pct..=100.0).contains(&hi_pct) {
        return Err(Error::InvalidConfig(format!(
            "percentiles {lo_pct}/{hi_pct} out of order"
        )));
    }
    per_step
        .iter()
        .enumerate()
        .map(|(step, values)| {
            if values.is_empty() {
                return Err(Error::Undefined(format!("no values at step {step}")));
            }
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            Ok(Band {
                lo: percentile(&sorted, lo_pct),
                mean: values.iter().sum::<f64>() / values.len() as f64,
                hi: percentile(&sorted, hi_pct),
            })
        })
        .collect()
}
