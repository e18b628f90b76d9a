use super::{threshold_stats, ScoreSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub threshold: f64,
    pub tpr: f64,
    pub fpr: Option<f64>,
    pub precision: Option<f64>,
}

/// Points ordered by ascending threshold. The first point fires on every
/// sample, the last on none.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub inclusive: bool,
    pub points: Vec<CurvePoint>,
}

fn point(s: &ScoreSet, threshold: f64, inclusive: bool) -> CurvePoint {
    let t = threshold_stats(s, threshold, inclusive);
    CurvePoint {
        threshold,
        // callers guarantee a positive exists
        tpr: t.tpr.unwrap_or(0.0),
        fpr: t.fpr,
        precision: t.precision,
    }
}

fn distinct(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

/// ROC points with the strict rule `score > threshold`: threshold 0, every
/// distinct score, then threshold 1.
pub fn roc_curve(s: &ScoreSet) -> Result<Curve> {
    if s.n_pos() == 0 {
        return Err(Error::NoPositives);
    }
    if s.n_neg() == 0 {
        return Err(Error::NoNegatives);
    }
    let mut thresholds = vec![0.0];
    thresholds.extend(distinct(s.scores().to_vec()));
    thresholds.push(1.0);
    Ok(Curve {
        inclusive: false,
        points: thresholds.into_iter().map(|t| point(s, t, false)).collect(),
    })
}

/// Precision-recall points with the inclusive rule `score >= threshold`:
/// threshold 0, every distinct positive score, then threshold 1. These are
/// the steps average precision integrates over.
pub fn pr_curve(s: &ScoreSet) -> Result<Curve> {
    if s.n_pos() == 0 {
        return Err(Error::NoPositives);
    }
    let positives = s
        .scores()
        .iter()
        .zip(s.labels())
        .filter(|(_, &l)| l)
        .map(|(&x, _)| x)
        .collect();
    let mut thresholds = vec![0.0];
    thresholds.extend(distinct(positives));
    thresholds.push(1.0);
    Ok(Curve {
        inclusive: true,
        points: thresholds.into_iter().map(|t| point(s, t, true)).collect(),
    })
}
