//! Incorrectly ranked adjacent pairs ("mistakes") and the effect of fixing them.
//!
//! With samples in ascending score order, a mistake is an adjacent pair whose
//! lower-scored member is positive and whose higher-scored member is negative.
//! Fixing it exchanges the two scores. Every fix raises AUROC by exactly
//! `1 / (N_P * N_N)`. The AUPRC gain is `precision / (N_P * (C - 1))`, where
//! `C` counts the samples scoring at or above the positive and `precision` is
//! the positive share among them.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{auprc, auroc, Metric, ScoreSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MistakeRecord {
    /// 0-based position of the positive member in the ascending order.
    pub low_index: usize,
    /// Sample index of the positive (lower-scored) member.
    pub low_sample: usize,
    /// Sample index of the negative (higher-scored) member.
    pub high_sample: usize,
    pub low_score: f64,
    pub high_score: f64,
    pub low_group: Option<u32>,
    pub high_group: Option<u32>,
    pub delta_auroc: f64,
    pub delta_auprc: f64,
}

impl MistakeRecord {
    /// True when both members carry `group`.
    pub fn within_group(&self, group: u32) -> bool {
        self.low_group == Some(group) && self.high_group == Some(group)
    }
}

fn swapped(s: &ScoreSet, a: usize, b: usize) -> ScoreSet {
    let mut out = s.clone();
    out.swap_scores(a, b);
    out
}

/// All mistakes, ascending by `low_index`, each with its exact deltas.
pub fn enumerate_mistakes(s: &ScoreSet) -> Result<Vec<MistakeRecord>> {
    let order = s.strict_order()?;
    let base_auroc = auroc(s)?;
    let base_auprc = auprc(s)?;
    let labels = s.labels();
    let mut out = Vec::new();
    for (pos, pair) in order.windows(2).enumerate() {
        let (lo, hi) = (pair[0], pair[1]);
        if !(labels[lo] && !labels[hi]) {
            continue;
        }
        let fixed = swapped(s, lo, hi);
        out.push(MistakeRecord {
            low_index: pos,
            low_sample: lo,
            high_sample: hi,
            low_score: s.scores()[lo],
            high_score: s.scores()[hi],
            low_group: s.group(lo),
            high_group: s.group(hi),
            delta_auroc: auroc(&fixed)? - base_auroc,
            delta_auprc: auprc(&fixed)? - base_auprc,
        });
    }
    Ok(out)
}

fn check_current(s: &ScoreSet, m: &MistakeRecord) -> Result<()> {
    let stale = Err(Error::StaleMistake(m.low_index));
    let n = s.len();
    if m.low_sample >= n || m.high_sample >= n || m.low_sample == m.high_sample {
        return stale;
    }
    let (scores, labels) = (s.scores(), s.labels());
    let (lo, hi) = (scores[m.low_sample], scores[m.high_sample]);
    if lo != m.low_score || hi != m.high_score || lo >= hi {
        return stale;
    }
    if !labels[m.low_sample] || labels[m.high_sample] {
        return stale;
    }
    let mut below = 0;
    for (i, &x) in scores.iter().enumerate() {
        if i == m.low_sample || i == m.high_sample {
            continue;
        }
        if x == lo || x == hi {
            return Err(Error::TiedScores {
                first: i.min(m.low_sample),
                second: i.max(m.low_sample),
                score: x,
            });
        }
        if x > lo && x < hi {
            return stale;
        }
        if x < lo {
            below += 1;
        }
    }
    if below != m.low_index {
        return stale;
    }
    Ok(())
}

/// Exchanges the scores of the mistake's two samples. Labels and groups stay
/// with their samples.
pub fn fix_mistake(s: &ScoreSet, m: &MistakeRecord) -> Result<ScoreSet> {
    check_current(s, m)?;
    Ok(swapped(s, m.low_sample, m.high_sample))
}

/// `(metric(fixed) - metric(s))` for AUROC and AUPRC, by full recomputation.
pub fn mistake_deltas(s: &ScoreSet, m: &MistakeRecord) -> Result<(f64, f64)> {
    let fixed = fix_mistake(s, m)?;
    Ok((auroc(&fixed)? - auroc(s)?, auprc(&fixed)? - auprc(s)?))
}

/// Picks the mistake to fix from an already enumerated list.
///
/// For AUPRC this is the largest AUPRC gain; for AUROC every gain is equal and
/// the choice is uniform.
pub fn choose_mistake<'a, R: Rng + ?Sized>(
    mistakes: &'a [MistakeRecord],
    objective: Metric,
    rng: &mut R,
) -> Result<&'a MistakeRecord> {
    if mistakes.is_empty() {
        return Err(Error::NoMistakes);
    }
    Ok(match objective {
        Metric::Auroc => &mistakes[rng.random_range(0..mistakes.len())],
        Metric::Auprc => mistakes
            .iter()
            .reduce(|best, m| if m.delta_auprc > best.delta_auprc { m } else { best })
            .expect("non-empty"),
    })
}

pub fn best_mistake<R: Rng + ?Sized>(
    s: &ScoreSet,
    objective: Metric,
    rng: &mut R,
) -> Result<MistakeRecord> {
    let mistakes = enumerate_mistakes(s)?;
    choose_mistake(&mistakes, objective, rng).cloned()
}
