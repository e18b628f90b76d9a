//! Synthetic sweep records with a planted rank relation between the signed
//! AUROC gap and overall validation AUPRC, for exercising the sweep pipeline
//! without trained models.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use super::sweep::RunRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSweep {
    pub dataset: String,
    pub splits: usize,
    pub runs_per_split: usize,
    /// Population Spearman correlation between the AUROC gap and validation AUPRC.
    pub gap_auprc_rho: f64,
    /// Population Spearman correlation between the AUROC gap and validation AUROC.
    pub gap_auroc_rho: f64,
    pub prevalence_high: f64,
    pub prevalence_low: f64,
}

impl Default for PlantedSweep {
    fn default() -> Self {
        Self {
            dataset: "planted".into(),
            splits: 20,
            runs_per_split: 50,
            gap_auprc_rho: 0.5,
            gap_auroc_rho: 0.0,
            prevalence_high: 0.2,
            prevalence_low: 0.05,
        }
    }
}

/// Pearson correlation of a bivariate normal whose Spearman correlation is `rho_s`.
pub fn pearson_for_spearman(rho_s: f64) -> f64 {
    2.0 * (PI * rho_s / 6.0).sin()
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl PlantedSweep {
    /// Draws records through a Gaussian copula. Group `a` is the
    /// higher-prevalence group.
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<RunRecord> {
        let r_auprc = pearson_for_spearman(self.gap_auprc_rho);
        let r_auroc = pearson_for_spearman(self.gap_auroc_rho);
        let mut out = Vec::with_capacity(self.splits * self.runs_per_split);
        for split in 0..self.splits {
            for run in 0..self.runs_per_split {
                let z_gap: f64 = rng.sample(StandardNormal);
                let e1: f64 = rng.sample(StandardNormal);
                let e2: f64 = rng.sample(StandardNormal);
                let z_auprc = r_auprc * z_gap + (1.0 - r_auprc * r_auprc).sqrt() * e1;
                let z_auroc = r_auroc * z_gap + (1.0 - r_auroc * r_auroc).sqrt() * e2;
                let low_auroc = 0.75;
                let gap = 0.1 * (2.0 * sigmoid(z_gap) - 1.0);
                out.push(RunRecord {
                    dataset: self.dataset.clone(),
                    split: format!("split{split:02}"),
                    run_id: format!("run{run:03}"),
                    seed: split as u64,
                    val_auroc: 0.6 + 0.35 * sigmoid(z_auroc),
                    val_auprc: 0.1 + 0.5 * sigmoid(z_auprc),
                    test_auroc_a: low_auroc + gap,
                    test_auroc_b: low_auroc,
                    test_auprc_a: 0.3 + 0.1 * sigmoid(z_auprc),
                    test_auprc_b: 0.1,
                    prevalence_a: self.prevalence_high,
                    prevalence_b: self.prevalence_low,
                    group_weight: Some(1.0),
                    hyperparams: Some(format!("fixture:{run}")),
                });
            }
        }
        out
    }
}
