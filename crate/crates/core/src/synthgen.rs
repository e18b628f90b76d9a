//! Synthetic score sets: target-AUROC sampling, prevalence rescaling,
//! perfectly calibrated samples and multi-group datasets.

use std::collections::HashSet;

use rand::Rng;
use rand_distr::{Beta, Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::ScoreSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_total: usize,
    pub prevalence: f64,
    pub target_auroc: f64,
    #[serde(default)]
    pub rescale_to_prevalence: bool,
    #[serde(default)]
    pub rescale_map: RescaleMap,
}

impl SynthConfig {
    /// Positive count, fixed at `round(n_total * prevalence)`.
    pub fn n_positive(&self) -> usize {
        (self.n_total as f64 * self.prevalence).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_total == 0 {
            return bad("n_total must be positive".into());
        }
        if !(self.prevalence > 0.0 && self.prevalence < 1.0) {
            return bad(format!("prevalence {} is outside (0, 1)", self.prevalence));
        }
        if !(0.5..=1.0).contains(&self.target_auroc) {
            return bad(format!(
                "target_auroc {} is outside [0.5, 1]",
                self.target_auroc
            ));
        }
        let np = self.n_positive();
        if np == 0 {
            return bad(format!(
                "n_total * prevalence = {} rounds to zero positives",
                self.n_total as f64 * self.prevalence
            ));
        }
        if np >= self.n_total {
            return bad("prevalence leaves no negative samples".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupParams {
    pub id: u32,
    pub n: usize,
    pub prevalence: f64,
    pub target_auroc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub groups: Vec<GroupParams>,
    #[serde(default)]
    pub rescale_to_prevalence: bool,
    #[serde(default)]
    pub rescale_map: RescaleMap,
}

impl GroupSpec {
    /// Two groups of `n` samples with prevalences 0.05 and 0.01 and a shared
    /// target AUROC, tagged 1 and 2.
    pub fn two_group_disparity(n: usize, target_auroc: f64) -> Self {
        Self {
            groups: vec![
                GroupParams {
                    id: 1,
                    n,
                    prevalence: 0.05,
                    target_auroc,
                },
                GroupParams {
                    id: 2,
                    n,
                    prevalence: 0.01,
                    target_auroc,
                },
            ],
            rescale_to_prevalence: true,
            rescale_map: RescaleMap::default(),
        }
    }

    fn config_for(&self, g: &GroupParams) -> SynthConfig {
        SynthConfig {
            n_total: g.n,
            prevalence: g.prevalence,
            target_auroc: g.target_auroc,
            rescale_to_prevalence: self.rescale_to_prevalence,
            rescale_map: self.rescale_map,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.groups.len() < 2 {
            return Err(Error::InvalidConfig(
                "a group spec needs at least two groups".into(),
            ));
        }
        let mut seen = HashSet::new();
        for g in &self.groups {
            if !seen.insert(g.id) {
                return Err(Error::InvalidConfig(format!("duplicate group id {}", g.id)));
            }
            self.config_for(g)
                .validate()
                .map_err(|e| Error::InvalidConfig(format!("group {}: {e}", g.id)))?;
        }
        Ok(())
    }
}

/// Uniform draw in the open interval `(low, high)` not already in `taken`.
fn draw_distinct<R: Rng + ?Sized>(rng: &mut R, low: f64, high: f64, taken: &mut HashSet<u64>) -> f64 {
    loop {
        let u: f64 = rng.random();
        let x = low + u * (high - low);
        if x > low && x < high && x > 0.0 && x < 1.0 && taken.insert(x.to_bits()) {
            return x;
        }
    }
}

fn sample_scores<R: Rng + ?Sized>(
    cfg: &SynthConfig,
    rng: &mut R,
    taken: &mut HashSet<u64>,
) -> Result<ScoreSet> {
    cfg.validate()?;
    let np = cfg.n_positive();
    let nn = cfg.n_total - np;

    let mut positives: Vec<f64> = (0..np).map(|_| draw_distinct(rng, 0.0, 1.0, taken)).collect();
    positives.sort_by(f64::total_cmp);
    // window i lies above exactly i positives: (edges[i], edges[i + 1])
    let mut edges = Vec::with_capacity(np + 2);
    edges.push(0.0);
    edges.extend_from_slice(&positives);
    edges.push(1.0);

    // A negative in window i sits above i of the np positives, so drawing
    // i ~ Binomial(np, 1 - A) puts it below a fraction A of positives on average.
    let window = Binomial::new(np as u64, 1.0 - cfg.target_auroc)
        .map_err(|e| Error::InvalidConfig(format!("window distribution: {e}")))?;
    let negatives: Vec<f64> = (0..nn)
        .map(|_| {
            let i = window.sample(rng) as usize;
            draw_distinct(rng, edges[i], edges[i + 1], taken)
        })
        .collect();

    let mut scores = positives;
    let mut labels = vec![true; np];
    scores.extend(negatives);
    labels.extend(std::iter::repeat_n(false, nn));
    let set = ScoreSet::new(scores, labels)?;
    if cfg.rescale_to_prevalence {
        rescale_mean_to_prevalence(&set, cfg.rescale_map)
    } else {
        Ok(set)
    }
}

/// Samples a strict score set whose AUROC equals `cfg.target_auroc` in
/// expectation. Positives come first, then negatives.
pub fn sample_target_auroc<R: Rng + ?Sized>(cfg: &SynthConfig, rng: &mut R) -> Result<ScoreSet> {
    sample_scores(cfg, rng, &mut HashSet::new())
}

const RESCALE_TOLERANCE: f64 = 1e-9;

/// Strictly increasing map used to move the mean score to the prevalence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RescaleMap {
    /// `s -> k * s` with `k = prevalence / mean`.
    Linear,
    /// `s -> s^g` with `g` found by bisection.
    Power,
    /// `s -> sigmoid(logit(s) + c)` with `c` found by bisection.
    #[default]
    LogitShift,
}

fn powered_mean(scores: &[f64], exponent: f64) -> f64 {
    scores.iter().map(|s| s.powf(exponent)).sum::<f64>() / scores.len() as f64
}

fn check_target(scores: &[f64], target: f64) -> Result<()> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Rescale(format!("target mean {target} is outside (0, 1)")));
    }
    if scores.is_empty() {
        return Err(Error::Empty);
    }
    Ok(())
}

/// Bisection for the parameter `p` in `[lo, hi]` where `mean_at(p) == target`;
/// `mean_at` must be strictly decreasing.
fn bisect_decreasing(mean_at: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    if mean_at(lo) < target || mean_at(hi) > target {
        return Err(Error::Rescale(format!("mean {target} is not reachable")));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let m = mean_at(mid);
        if (m - target).abs() < RESCALE_TOLERANCE {
            return Ok(mid);
        }
        if m > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Rescale(format!(
        "bisection did not reach mean {target} within {RESCALE_TOLERANCE}"
    )))
}

/// Exponent `g` with `mean(s^g) == target` to within 1e-9, by bisection on
/// `ln g` (the powered mean is strictly decreasing in `g`).
pub fn power_exponent_for_mean(scores: &[f64], target: f64) -> Result<f64> {
    check_target(scores, target)?;
    if (powered_mean(scores, 1.0) - target).abs() < RESCALE_TOLERANCE {
        return Ok(1.0);
    }
    bisect_decreasing(|l| powered_mean(scores, l.exp()), target, -60.0, 60.0).map(f64::exp)
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Shift `c` with `mean(sigmoid(logit(s) + c)) == target` to within 1e-9.
pub fn logit_shift_for_mean(scores: &[f64], target: f64) -> Result<f64> {
    check_target(scores, target)?;
    let logits: Vec<f64> = scores.iter().map(|&s| logit(s)).collect();
    let mean_at = |c: f64| logits.iter().map(|l| sigmoid(l + c)).sum::<f64>() / logits.len() as f64;
    if (mean_at(0.0) - target).abs() < RESCALE_TOLERANCE {
        return Ok(0.0);
    }
    bisect_decreasing(|c| mean_at(-c), target, -60.0, 60.0).map(|c| -c)
}

impl RescaleMap {
    /// Scores mapped so their mean equals `target`.
    pub fn apply(self, scores: &[f64], target: f64) -> Result<Vec<f64>> {
        check_target(scores, target)?;
        Ok(match self {
            RescaleMap::Linear => {
                let mean = scores.iter().sum::<f64>() / scores.len() as f64;
                let k = target / mean;
                scores.iter().map(|s| s * k).collect()
            }
            RescaleMap::Power => {
                let g = power_exponent_for_mean(scores, target)?;
                scores.iter().map(|s| s.powf(g)).collect()
            }
            RescaleMap::LogitShift => {
                let c = logit_shift_for_mean(scores, target)?;
                scores.iter().map(|&s| sigmoid(logit(s) + c)).collect()
            }
        })
    }
}

/// Maps scores so the mean score equals the set's prevalence.
///
/// Ranks, and with them AUROC and AUPRC, are unchanged. Fails if the map
/// would push a score out of (0, 1) or merge two distinct scores.
pub fn rescale_mean_to_prevalence(s: &ScoreSet, map: RescaleMap) -> Result<ScoreSet> {
    let mean = s.scores().iter().sum::<f64>() / s.len().max(1) as f64;
    if (mean - s.prevalence()).abs() < RESCALE_TOLERANCE {
        return Ok(s.clone());
    }
    let mapped = map.apply(s.scores(), s.prevalence())?;
    if let Some(bad) = mapped.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        return Err(Error::Rescale(format!("{map:?} map sends a score to {bad}")));
    }
    if distinct_count(&mapped) != distinct_count(s.scores()) {
        return Err(Error::Rescale(format!("{map:?} map merges distinct scores")));
    }
    s.with_scores(mapped)
}

fn distinct_count(xs: &[f64]) -> usize {
    xs.iter().map(|x| x.to_bits()).collect::<HashSet<_>>().len()
}

/// Score distribution for [`sample_calibrated`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScoreDistribution {
    Constant { value: f64 },
    Uniform { low: f64, high: f64 },
    Beta { alpha: f64, beta: f64 },
}

impl ScoreDistribution {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            ScoreDistribution::Constant { value } => value > 0.0 && value < 1.0,
            ScoreDistribution::Uniform { low, high } => {
                (0.0..1.0).contains(&low) && high > low && high <= 1.0
            }
            ScoreDistribution::Beta { alpha, beta } => alpha > 0.0 && beta > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("invalid score distribution {self:?}")))
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let x = match *self {
                ScoreDistribution::Constant { value } => value,
                ScoreDistribution::Uniform { low, high } => low + rng.random::<f64>() * (high - low),
                ScoreDistribution::Beta { alpha, beta } => {
                    Beta::new(alpha, beta).expect("validated").sample(rng)
                }
            };
            if x > 0.0 && x < 1.0 {
                return x;
            }
        }
    }
}

/// Scores from `dist`, each labelled positive with probability equal to its
/// score, so the sample is perfectly calibrated by construction.
pub fn sample_calibrated<R: Rng + ?Sized>(
    n: usize,
    dist: &ScoreDistribution,
    rng: &mut R,
) -> Result<ScoreSet> {
    if n == 0 {
        return Err(Error::Empty);
    }
    dist.validate()?;
    let scores: Vec<f64> = (0..n).map(|_| dist.draw(rng)).collect();
    let labels = scores.iter().map(|&s| rng.random::<f64>() < s).collect();
    ScoreSet::new(scores, labels)
}

/// One target-AUROC sample per group, concatenated and tagged with group ids.
/// Scores are distinct across groups.
pub fn build_two_group_dataset<R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R) -> Result<ScoreSet> {
    spec.validate()?;
    let mut taken = HashSet::new();
    let mut parts = Vec::with_capacity(spec.groups.len());
    for g in &spec.groups {
        let set = sample_scores(&spec.config_for(g), rng, &mut taken)?;
        let tags = vec![g.id; set.len()];
        parts.push(set.tagged(tags)?);
    }
    let joint = ScoreSet::concat(&parts)?;
    if !joint.is_strict() {
        return Err(Error::Rescale("rescaled scores of two groups coincide".into()));
    }
    Ok(joint)
}

/// Either a single-population sample or a multi-group dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DatasetSpec {
    Single(SynthConfig),
    Groups(GroupSpec),
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DatasetSpec::Single(c) => c.validate(),
            DatasetSpec::Groups(g) => g.validate(),
        }
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ScoreSet> {
        match self {
            DatasetSpec::Single(c) => sample_target_auroc(c, rng),
            DatasetSpec::Groups(g) => build_two_group_dataset(g, rng),
        }
    }
}
