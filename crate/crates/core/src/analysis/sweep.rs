use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::spearman::{spearman, SpearmanResult};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// One trained model from a hyperparameter sweep: overall validation metrics
/// and per-group test metrics for two groups `a` and `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    #[serde(default = "default_dataset")]
    pub dataset: String,
    pub split: String,
    pub run_id: String,
    pub seed: u64,
    pub val_auroc: f64,
    pub val_auprc: f64,
    pub test_auroc_a: f64,
    pub test_auroc_b: f64,
    pub test_auprc_a: f64,
    pub test_auprc_b: f64,
    pub prevalence_a: f64,
    pub prevalence_b: f64,
    #[serde(default)]
    pub group_weight: Option<f64>,
    #[serde(default)]
    pub hyperparams: Option<String>,
}

fn default_dataset() -> String {
    "default".to_string()
}

impl RunRecord {
    /// Signed AUROC gap given which group has the higher prevalence.
    pub fn auroc_gap(&self, a_is_higher: bool) -> f64 {
        let d = self.test_auroc_a - self.test_auroc_b;
        if a_is_higher {
            d
        } else {
            -d
        }
    }

    pub fn auprc_gap(&self, a_is_higher: bool) -> f64 {
        let d = self.test_auprc_a - self.test_auprc_b;
        if a_is_higher {
            d
        } else {
            -d
        }
    }
}

/// Whether group `a` is the higher-prevalence group, judged once from the
/// mean stated prevalences over all records so gap signs agree across splits.
pub fn higher_prevalence_is_a(records: &[RunRecord]) -> Result<bool> {
    if records.is_empty() {
        return Err(Error::Empty);
    }
    let n = records.len() as f64;
    let a = records.iter().map(|r| r.prevalence_a).sum::<f64>() / n;
    let b = records.iter().map(|r| r.prevalence_b).sum::<f64>() / n;
    if a == b {
        return Err(Error::Undefined(format!(
            "groups a and b have equal mean prevalence {a}"
        )));
    }
    Ok(a > b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitCorrelation {
    pub split: String,
    pub n_runs: usize,
    /// Spearman of the signed AUROC gap against overall validation AUPRC.
    pub gap_vs_auprc: SpearmanResult,
    /// Spearman of the signed AUROC gap against overall validation AUROC.
    pub gap_vs_auroc: SpearmanResult,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub dataset: String,
    pub higher_prevalence_group: char,
    pub prevalence_ratio: f64,
    pub splits: Vec<SplitCorrelation>,
    pub mean_difference: f64,
    /// 95% t-interval over split-level differences; absent with one split.
    pub ci95: Option<(f64, f64)>,
    pub ci_method: &'static str,
}

/// Spearman of `x` against `y`, naming the offending column when one is constant.
fn named_spearman(x: &[f64], y: &[f64], x_col: &str, y_col: &str, split: &str) -> Result<SpearmanResult> {
    spearman(x, y).map_err(|e| match e {
        Error::Undefined(msg) => {
            let column = if msg.starts_with("x ") { x_col } else { y_col };
            Error::Undefined(format!("column `{column}` in split `{split}`: {msg}"))
        }
        other => other,
    })
}

fn correlate_split(split: &str, runs: &[&RunRecord], a_high: bool) -> Result<SplitCorrelation> {
    if runs.len() < 3 {
        return Err(Error::Undefined(format!(
            "split `{split}` has {} runs; at least 3 are needed",
            runs.len()
        )));
    }
    let gap: Vec<f64> = runs.iter().map(|r| r.auroc_gap(a_high)).collect();
    let val_auprc: Vec<f64> = runs.iter().map(|r| r.val_auprc).collect();
    let val_auroc: Vec<f64> = runs.iter().map(|r| r.val_auroc).collect();
    let gap_vs_auprc = named_spearman(&gap, &val_auprc, "auroc_gap", "val_auprc", split)?;
    let gap_vs_auroc = named_spearman(&gap, &val_auroc, "auroc_gap", "val_auroc", split)?;
    Ok(SplitCorrelation {
        split: split.to_string(),
        n_runs: runs.len(),
        difference: gap_vs_auprc.rho - gap_vs_auroc.rho,
        gap_vs_auprc,
        gap_vs_auroc,
    })
}

/// Mean and 95% t-interval of `values`.
pub(crate) fn t_interval(values: &[f64]) -> (f64, Option<(f64, f64)>) {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("df >= 1")
        .inverse_cdf(0.975);
    (mean, Some((mean - t * se, mean + t * se)))
}

/// Per-split Spearman correlations of the signed AUROC gap against overall
/// AUPRC and overall AUROC, and their difference aggregated across splits.
/// All records must come from a single dataset.
pub fn sweep_correlations(records: &[RunRecord], exec: Execution) -> Result<SweepSummary> {
    let a_high = higher_prevalence_is_a(records)?;
    let dataset = records[0].dataset.clone();
    if let Some(other) = records.iter().find(|r| r.dataset != dataset) {
        return Err(Error::InvalidConfig(format!(
            "records mix datasets `{dataset}` and `{}`",
            other.dataset
        )));
    }
    let mut by_split: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        by_split.entry(r.split.as_str()).or_default().push(r);
    }
    let groups: Vec<(&str, Vec<&RunRecord>)> = by_split.into_iter().collect();
    let splits = exec
        .map(&groups, |(split, runs)| correlate_split(split, runs, a_high))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = splits.iter().map(|s| s.difference).collect();
    let (mean_difference, ci95) = t_interval(&diffs);

    let n = records.len() as f64;
    let pa = records.iter().map(|r| r.prevalence_a).sum::<f64>() / n;
    let pb = records.iter().map(|r| r.prevalence_b).sum::<f64>() / n;
    let prevalence_ratio = if a_high { pa / pb } else { pb / pa };

    Ok(SweepSummary {
        dataset,
        higher_prevalence_group: if a_high { 'a' } else { 'b' },
        prevalence_ratio,
        splits,
        mean_difference,
        ci95,
        ci_method: "t-interval over split-level differences",
    })
}

/// Spearman correlation across datasets of prevalence ratio against the
/// AUPRC-minus-AUROC correlation difference.
pub fn meta_correlation(points: &[(f64, f64)]) -> Result<SpearmanResult> {
    if points.len() < 3 {
        return Err(Error::Undefined(format!(
            "meta-correlation needs at least 3 datasets, got {}",
            points.len()
        )));
    }
    let x: Vec<f64> = points.iter().map(|p| p.0).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    spearman(&x, &y)
}
