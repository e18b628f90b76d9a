//! Exact empirical AUROC and AUPRC.
//!
//! AUROC is the Mann-Whitney probability that a random positive outranks a
//! random negative (ties credited one half). AUPRC is average precision: the
//! mean over positive samples of the precision obtained when firing on every
//! score at or above that positive's score.
//!
//! Both metrics also have a form written as an expectation over positive
//! scores of a false positive rate. [`auroc_reparam`] evaluates
//! `1 - E[FPR(t)]` with strict (`score > t`) comparisons, and
//! [`auprc_reparam`] evaluates `1 - P(y=0) E[FPR(t) / FR(t)]` with inclusive
//! (`score >= t`) comparisons. Those are the comparison conventions under
//! which the expectation forms agree with the direct metrics exactly on a
//! finite sample.

mod curve;
mod score_set;

pub use curve::{pr_curve, roc_curve, Curve, CurvePoint};
pub use score_set::ScoreSet;
pub(crate) use score_set::tie_blocks;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of the two ranking metrics to compute or optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Auroc,
    Auprc,
}

impl Metric {
    pub fn evaluate(self, s: &ScoreSet) -> Result<f64> {
        match self {
            Metric::Auroc => auroc(s),
            Metric::Auprc => auprc(s),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Auroc => "auroc",
            Metric::Auprc => "auprc",
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auroc" => Ok(Metric::Auroc),
            "auprc" => Ok(Metric::Auprc),
            other => Err(Error::InvalidConfig(format!(
                "unknown metric `{other}` (expected auroc or auprc)"
            ))),
        }
    }
}

/// Confusion counts and rates at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdStats {
    pub threshold: f64,
    pub inclusive: bool,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    /// `None` when there are no positives.
    pub tpr: Option<f64>,
    /// `None` when there are no negatives.
    pub fpr: Option<f64>,
    /// `None` when nothing fires.
    pub precision: Option<f64>,
    pub firing_rate: f64,
}

/// Counts at `threshold`. A sample fires when `score > threshold`, or
/// `score >= threshold` if `inclusive`.
pub fn threshold_stats(s: &ScoreSet, threshold: f64, inclusive: bool) -> ThresholdStats {
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&score, &label) in s.scores().iter().zip(s.labels()) {
        let fires = if inclusive {
            score >= threshold
        } else {
            score > threshold
        };
        match (fires, label) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    ThresholdStats {
        threshold,
        inclusive,
        tp,
        fp,
        tn,
        fn_,
        tpr: ratio(tp, tp + fn_),
        fpr: ratio(fp, fp + tn),
        precision: ratio(tp, tp + fp),
        firing_rate: (tp + fp) as f64 / s.len() as f64,
    }
}

fn require_both_classes(s: &ScoreSet) -> Result<(usize, usize)> {
    let (np, nn) = (s.n_pos(), s.n_neg());
    if np == 0 {
        return Err(Error::NoPositives);
    }
    if nn == 0 {
        return Err(Error::NoNegatives);
    }
    Ok((np, nn))
}

/// Area under the ROC curve.
pub fn auroc(s: &ScoreSet) -> Result<f64> {
    let (np, nn) = require_both_classes(s)?;
    let order = s.ascending_order();
    // Twice the count of correctly ordered (pos, neg) pairs, ties counting one.
    let mut doubled: u64 = 0;
    let mut neg_below: u64 = 0;
    for block in tie_blocks(s.scores(), &order) {
        let pos = block.iter().filter(|&&i| s.labels()[i]).count() as u64;
        let neg = block.len() as u64 - pos;
        doubled += pos * (2 * neg_below + neg);
        neg_below += neg;
    }
    Ok(doubled as f64 / (2 * np as u64 * nn as u64) as f64)
}

/// Average precision.
pub fn auprc(s: &ScoreSet) -> Result<f64> {
    let np = s.n_pos();
    if np == 0 {
        return Err(Error::NoPositives);
    }
    let mut order = s.ascending_order();
    order.reverse();
    let (mut tp, mut fired) = (0usize, 0usize);
    let mut total = 0.0;
    for block in tie_blocks(s.scores(), &order) {
        let pos = block.iter().filter(|&&i| s.labels()[i]).count();
        tp += pos;
        fired += block.len();
        if pos > 0 {
            total += pos as f64 * (tp as f64 / fired as f64);
        }
    }
    Ok(total / np as f64)
}

/// `1 - mean FPR` over positive scores, strict comparisons. Requires a strict set.
pub fn auroc_reparam(s: &ScoreSet) -> Result<f64> {
    let order = s.strict_order()?;
    let (np, nn) = require_both_classes(s)?;
    let mut neg_above = nn;
    let mut fpr_sum = 0.0;
    for &i in &order {
        if s.labels()[i] {
            fpr_sum += neg_above as f64 / nn as f64;
        } else {
            neg_above -= 1;
        }
    }
    Ok(1.0 - fpr_sum / np as f64)
}

/// The two expectation forms of AUPRC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuprcForms {
    /// Mean inclusive precision at each positive score.
    pub precision_form: f64,
    /// `1 - P(y=0) * mean(FPR / FR)` over positive scores, inclusive comparisons.
    pub bayes_form: f64,
}

impl AuprcForms {
    /// Largest absolute disagreement with `reference`.
    pub fn residual(&self, reference: f64) -> f64 {
        (self.precision_form - reference)
            .abs()
            .max((self.bayes_form - reference).abs())
    }
}

/// Both expectation forms of AUPRC. Requires a strict set with a positive.
pub fn auprc_reparam(s: &ScoreSet) -> Result<AuprcForms> {
    let mut order = s.strict_order()?;
    let np = s.n_pos();
    if np == 0 {
        return Err(Error::NoPositives);
    }
    let n = s.len();
    let nn = s.n_neg();
    order.reverse();
    let (mut pos_ge, mut neg_ge) = (0usize, 0usize);
    let mut precision_sum = 0.0;
    let mut ratio_sum = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        let fired = rank + 1;
        if !s.labels()[i] {
            neg_ge += 1;
            continue;
        }
        pos_ge += 1;
        precision_sum += pos_ge as f64 / fired as f64;
        if nn > 0 {
            let fpr = neg_ge as f64 / nn as f64;
            let firing_rate = fired as f64 / n as f64;
            ratio_sum += fpr / firing_rate;
        }
    }
    let negative_share = nn as f64 / n as f64;
    Ok(AuprcForms {
        precision_form: precision_sum / np as f64,
        bayes_form: 1.0 - negative_share * ratio_sum / np as f64,
    })
}
