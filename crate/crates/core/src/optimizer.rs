//! Metric-greedy optimization of a fixed score set.
//!
//! Three procedures are available:
//!
//! * [`Procedure::Noise`] adds uniform noise in `[-delta, delta]` to every
//!   score, draws `candidates` such perturbations and keeps the best.
//! * [`Procedure::FixMistakes`] fixes one incorrectly ranked adjacent pair per
//!   step: the one with the largest AUPRC gain, or a uniformly random one
//!   when optimizing AUROC (all AUROC gains are equal).
//! * [`Procedure::Permute`] re-indexes the ascending scores by `candidates`
//!   random permutations that move no score more than `gamma` positions and
//!   keeps the best.
//!
//! For the two sampling procedures the unmodified scores compete as candidate
//! 0, so the optimized metric never decreases. Per-group metrics can.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{per_group_metrics, GroupMetrics};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::{auprc, auroc, Metric, ScoreSet};
use crate::synthgen::DatasetSpec;
use crate::mistakes::{choose_mistake, enumerate_mistakes, fix_mistake, MistakeRecord};

/// Noise draws per step for [`Procedure::Noise`].
pub const DEFAULT_NOISE_CANDIDATES: usize = 100;
/// Permutation draws per step for [`Procedure::Permute`]; configurable.
pub const DEFAULT_PERMUTE_CANDIDATES: usize = 20;
pub const DEFAULT_GAMMA: usize = 3;
/// Noise magnitudes run as independent arms.
pub const DEFAULT_DELTA_GRID: [f64; 10] = [0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10];
/// Perturbed scores are clamped into `[SCORE_FLOOR, 1 - SCORE_FLOOR]`.
pub const SCORE_FLOOR: f64 = 1e-9;
/// Upper bound on rejected permutation draws for a single candidate.
const MAX_PERMUTATION_REJECTIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Procedure {
    Noise { delta_max: f64, candidates: usize },
    FixMistakes,
    Permute { gamma: usize, candidates: usize },
}

impl Procedure {
    pub fn label(&self) -> &'static str {
        match self {
            Procedure::Noise { .. } => "noise",
            Procedure::FixMistakes => "fix_mistakes",
            Procedure::Permute { .. } => "permute",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub procedure: Procedure,
    pub objective: Metric,
    pub steps: usize,
    /// How candidates within a step are scored. Does not affect results.
    pub execution: Execution,
}

impl OptimizerConfig {
    pub fn new(procedure: Procedure, objective: Metric, steps: usize) -> Self {
        Self {
            procedure,
            objective,
            steps,
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.procedure {
            Procedure::Noise { delta_max, candidates } => {
                if !(delta_max >= 0.0 && delta_max.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "delta_max must be a finite non-negative number, got {delta_max}"
                    )));
                }
                if candidates == 0 {
                    return Err(Error::InvalidConfig("candidates must be positive".into()));
                }
            }
            Procedure::Permute { gamma, candidates } => {
                if gamma == 0 {
                    return Err(Error::InvalidConfig("gamma must be at least 1".into()));
                }
                if candidates == 0 {
                    return Err(Error::InvalidConfig("candidates must be positive".into()));
                }
            }
            Procedure::FixMistakes => {}
        }
        Ok(())
    }
}

/// What a step changed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Change {
    Initial,
    /// Chosen noise draw; 0 means the unperturbed scores won.
    Noise { candidate: usize },
    Mistake(MistakeRecord),
    /// Chosen permutation draw; 0 means the identity won.
    Permutation {
        candidate: usize,
        max_displacement: usize,
        rejected: usize,
    },
}

impl Change {
    pub fn describe(&self) -> String {
        match self {
            Change::Initial => "initial".into(),
            Change::Noise { candidate } => format!("noise:{candidate}"),
            Change::Mistake(m) => format!("mistake:{}", m.low_index + 1),
            Change::Permutation { candidate, .. } => format!("permutation:{candidate}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub auroc: f64,
    pub auprc: f64,
    pub groups: BTreeMap<u32, GroupMetrics>,
    pub change: Change,
}

impl StepRecord {
    fn measure(step: usize, s: &ScoreSet, change: Change) -> Result<Self> {
        Ok(Self {
            step,
            auroc: auroc(s)?,
            auprc: auprc(s)?,
            groups: if s.groups().is_some() {
                per_group_metrics(s)?
            } else {
                BTreeMap::new()
            },
            change,
        })
    }

    pub fn overall(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Auroc => self.auroc,
            Metric::Auprc => self.auprc,
        }
    }

    pub fn group(&self, group: u32, metric: Metric) -> Option<f64> {
        self.groups.get(&group).and_then(|g| g.get(metric))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Step 0 is the unmodified input.
    pub steps: Vec<StepRecord>,
    /// Set when mistake fixing stopped early because none were left.
    pub converged: bool,
}

impl Trajectory {
    pub fn last(&self) -> &StepRecord {
        self.steps.last().expect("trajectory always holds step 0")
    }

    pub fn mistakes(&self) -> impl Iterator<Item = &MistakeRecord> {
        self.steps.iter().filter_map(|s| match &s.change {
            Change::Mistake(m) => Some(m),
            _ => None,
        })
    }
}

fn wrong_procedure(expected: &str, cfg: &OptimizerConfig) -> Error {
    Error::InvalidConfig(format!(
        "{expected} step called with procedure {}",
        cfg.procedure.label()
    ))
}

/// Picks the best candidate score vector; index 0 must be the incumbent.
fn best_candidate(
    s: &ScoreSet,
    candidates: &[Vec<f64>],
    objective: Metric,
    exec: Execution,
) -> Result<usize> {
    let sets = candidates
        .iter()
        .map(|c| s.with_scores(c.clone()))
        .collect::<Result<Vec<_>>>()?;
    // an undefined objective means a class is missing, which is the same for every candidate
    objective.evaluate(s)?;
    Ok(exec
        .argmax(&sets, |c| objective.evaluate(c).unwrap_or(f64::NAN))
        .unwrap_or(0))
}

/// One random-noise step. Returns the new set and the winning draw.
pub fn step_m1<R: Rng + ?Sized>(
    s: &ScoreSet,
    cfg: &OptimizerConfig,
    rng: &mut R,
) -> Result<(ScoreSet, usize)> {
    let Procedure::Noise { delta_max, candidates } = cfg.procedure else {
        return Err(wrong_procedure("noise", cfg));
    };
    cfg.validate()?;
    if delta_max == 0.0 {
        return Ok((s.clone(), 0));
    }
    let mut pool = Vec::with_capacity(candidates + 1);
    pool.push(s.scores().to_vec());
    for _ in 0..candidates {
        pool.push(
            s.scores()
                .iter()
                .map(|&x| {
                    let eps = rng.random_range(-delta_max..=delta_max);
                    (x + eps).clamp(SCORE_FLOOR, 1.0 - SCORE_FLOOR)
                })
                .collect(),
        );
    }
    let winner = best_candidate(s, &pool, cfg.objective, cfg.execution)?;
    let chosen = s.with_scores(pool.swap_remove(winner))?;
    Ok((chosen, winner))
}

/// One mistake-fixing step, or `None` when no mistakes remain.
pub fn step_m2<R: Rng + ?Sized>(
    s: &ScoreSet,
    cfg: &OptimizerConfig,
    rng: &mut R,
) -> Result<Option<(ScoreSet, MistakeRecord)>> {
    if cfg.procedure != Procedure::FixMistakes {
        return Err(wrong_procedure("fix_mistakes", cfg));
    }
    let mistakes = enumerate_mistakes(s)?;
    if mistakes.is_empty() {
        return Ok(None);
    }
    let m = choose_mistake(&mistakes, cfg.objective, rng)?.clone();
    Ok(Some((fix_mistake(s, &m)?, m)))
}

/// A permutation `perm` of `0..n` with `|perm[i] - i| <= gamma`, sampled by
/// sorting `i + U(-gamma, gamma)` and rejecting draws that move too far.
/// Returns the permutation and the number of rejected draws.
pub fn sample_bounded_permutation<R: Rng + ?Sized>(
    n: usize,
    gamma: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, usize)> {
    let g = gamma as f64;
    let reach = 2 * gamma;
    let mut keys: Vec<f64> = Vec::with_capacity(n);
    let mut perm = vec![0usize; n];
    'draw: for rejected in 0..MAX_PERMUTATION_REJECTIONS {
        keys.clear();
        for i in 0..n + reach {
            if i < n {
                keys.push(i as f64 + rng.random_range(-g..g));
            }
            // keys more than 2 * gamma apart keep their order, so the rank of
            // element `i - reach` is settled once key `i` is drawn
            let Some(e) = i.checked_sub(reach) else { continue };
            let lo = e.saturating_sub(reach);
            let hi = (e + reach).min(n - 1);
            let below = (lo..=hi).filter(|&j| keys[j] < keys[e]).count();
            let rank = lo + below;
            if rank.abs_diff(e) > gamma {
                continue 'draw;
            }
            perm[rank] = e;
        }
        return Ok((perm, rejected));
    }
    Err(Error::Undefined(format!(
        "no permutation of {n} positions within displacement {gamma} after {MAX_PERMUTATION_REJECTIONS} draws"
    )))
}

pub fn displacement(perm: &[usize]) -> usize {
    perm.iter()
        .enumerate()
        .map(|(i, &p)| i.abs_diff(p))
        .max()
        .unwrap_or(0)
}

/// Permutation step metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermutationChoice {
    pub candidate: usize,
    pub max_displacement: usize,
    pub rejected: usize,
}

/// One bounded-permutation step.
pub fn step_m3<R: Rng + ?Sized>(
    s: &ScoreSet,
    cfg: &OptimizerConfig,
    rng: &mut R,
) -> Result<(ScoreSet, PermutationChoice)> {
    let Procedure::Permute { gamma, candidates } = cfg.procedure else {
        return Err(wrong_procedure("permute", cfg));
    };
    cfg.validate()?;
    let order = s.ascending_order();
    let sorted: Vec<f64> = order.iter().map(|&i| s.scores()[i]).collect();
    let mut pool = Vec::with_capacity(candidates + 1);
    let mut meta = Vec::with_capacity(candidates + 1);
    pool.push(s.scores().to_vec());
    meta.push((0, 0));
    for _ in 0..candidates {
        let (perm, rejected) = sample_bounded_permutation(order.len(), gamma, rng)?;
        let mut scores = vec![0.0; order.len()];
        // the sample at ascending position i takes the score from position perm[i]
        for (pos, &sample) in order.iter().enumerate() {
            scores[sample] = sorted[perm[pos]];
        }
        pool.push(scores);
        meta.push((displacement(&perm), rejected));
    }
    let winner = best_candidate(s, &pool, cfg.objective, cfg.execution)?;
    let (max_displacement, _) = meta[winner];
    let rejected = meta.iter().map(|m| m.1).sum();
    let chosen = s.with_scores(pool.swap_remove(winner))?;
    Ok((
        chosen,
        PermutationChoice {
            candidate: winner,
            max_displacement,
            rejected,
        },
    ))
}

/// Applies `cfg.steps` steps (fewer if mistake fixing converges), measuring
/// overall and per-group metrics after each.
pub fn run<R: Rng + ?Sized>(s: &ScoreSet, cfg: &OptimizerConfig, rng: &mut R) -> Result<Trajectory> {
    cfg.validate()?;
    let mut current = s.clone();
    let mut steps = vec![StepRecord::measure(0, &current, Change::Initial)?];
    let mut converged = false;
    for step in 1..=cfg.steps {
        let change = match cfg.procedure {
            Procedure::Noise { .. } => {
                let (next, candidate) = step_m1(&current, cfg, rng)?;
                current = next;
                Change::Noise { candidate }
            }
            Procedure::FixMistakes => match step_m2(&current, cfg, rng)? {
                Some((next, m)) => {
                    current = next;
                    Change::Mistake(m)
                }
                None => {
                    converged = true;
                    break;
                }
            },
            Procedure::Permute { .. } => {
                let (next, choice) = step_m3(&current, cfg, rng)?;
                current = next;
                Change::Permutation {
                    candidate: choice.candidate,
                    max_displacement: choice.max_displacement,
                    rejected: choice.rejected,
                }
            }
        };
        steps.push(StepRecord::measure(step, &current, change)?);
    }
    Ok(Trajectory { steps, converged })
}

/// One seed of an ensemble: the dataset is drawn from `seed` and the same
/// generator then drives the optimizer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedRun {
    pub seed: u64,
    pub trajectory: Trajectory,
}

/// Runs every seed independently, in parallel when `exec` allows. Output is
/// ordered as `seeds` and does not depend on `exec`.
pub fn run_seeds(
    dataset: &DatasetSpec,
    cfg: &OptimizerConfig,
    seeds: &[u64],
    exec: Execution,
) -> Result<Vec<SeedRun>> {
    dataset.validate()?;
    cfg.validate()?;
    exec.map(seeds, |&seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = dataset.generate(&mut rng)?;
        let trajectory = run(&set, cfg, &mut rng)?;
        Ok(SeedRun { seed, trajectory })
    })
    .into_iter()
    .collect()
}
