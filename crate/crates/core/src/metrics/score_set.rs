use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Paired classifier scores, binary labels and optional group tags.
///
/// Scores lie in the open interval (0, 1). A set is *strict* when no two
/// scores are equal; the reparametrized metric forms and the mistake
/// machinery require strict sets.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSet {
    scores: Vec<f64>,
    labels: Vec<bool>,
    groups: Option<Vec<u32>>,
}

impl ScoreSet {
    pub fn new(scores: Vec<f64>, labels: Vec<bool>) -> Result<Self> {
        Self::build(scores, labels, None)
    }

    pub fn with_groups(scores: Vec<f64>, labels: Vec<bool>, groups: Vec<u32>) -> Result<Self> {
        Self::build(scores, labels, Some(groups))
    }

    /// Convenience constructor taking 0/1 labels.
    pub fn from_binary(scores: &[f64], labels: &[u8]) -> Result<Self> {
        Self::new(scores.to_vec(), labels.iter().map(|&l| l != 0).collect())
    }

    fn build(scores: Vec<f64>, labels: Vec<bool>, groups: Option<Vec<u32>>) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::Empty);
        }
        if labels.len() != scores.len() {
            return Err(Error::LengthMismatch {
                what: "labels",
                expected: scores.len(),
                found: labels.len(),
            });
        }
        if let Some(g) = &groups {
            if g.len() != scores.len() {
                return Err(Error::LengthMismatch {
                    what: "groups",
                    expected: scores.len(),
                    found: g.len(),
                });
            }
        }
        if let Some((index, &value)) = scores
            .iter()
            .enumerate()
            .find(|(_, s)| !(**s > 0.0 && **s < 1.0))
        {
            return Err(Error::ScoreOutOfRange { index, value });
        }
        Ok(Self {
            scores,
            labels,
            groups,
        })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn groups(&self) -> Option<&[u32]> {
        self.groups.as_deref()
    }

    pub fn group(&self, index: usize) -> Option<u32> {
        self.groups.as_ref().map(|g| g[index])
    }

    pub fn n_pos(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }

    pub fn n_neg(&self) -> usize {
        self.len() - self.n_pos()
    }

    pub fn prevalence(&self) -> f64 {
        self.n_pos() as f64 / self.len() as f64
    }

    /// Sample indices sorted by ascending score (stable for equal scores).
    pub fn ascending_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.scores[a].total_cmp(&self.scores[b]));
        order
    }

    /// Ascending order, or the first tied pair found.
    pub fn strict_order(&self) -> Result<Vec<usize>> {
        let order = self.ascending_order();
        for w in order.windows(2) {
            if self.scores[w[0]] == self.scores[w[1]] {
                let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(Error::TiedScores {
                    first,
                    second,
                    score: self.scores[first],
                });
            }
        }
        Ok(order)
    }

    pub fn is_strict(&self) -> bool {
        self.strict_order().is_ok()
    }

    /// Same labels and groups with a replacement score vector.
    pub fn with_scores(&self, scores: Vec<f64>) -> Result<Self> {
        Self::build(scores, self.labels.clone(), self.groups.clone())
    }

    /// Every label inverted.
    pub fn with_labels_flipped(&self) -> Self {
        Self {
            scores: self.scores.clone(),
            labels: self.labels.iter().map(|l| !l).collect(),
            groups: self.groups.clone(),
        }
    }

    /// Same scores and labels, tagged with `groups`.
    pub fn tagged(&self, groups: Vec<u32>) -> Result<Self> {
        Self::build(self.scores.clone(), self.labels.clone(), Some(groups))
    }

    pub(crate) fn swap_scores(&mut self, a: usize, b: usize) {
        self.scores.swap(a, b);
    }

    /// Distinct group ids in ascending order; empty for an untagged set.
    pub fn group_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.groups.clone().unwrap_or_default();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// The samples tagged `group`, or `None` if no sample carries the tag.
    pub fn restrict_to_group(&self, group: u32) -> Option<Self> {
        let groups = self.groups.as_ref()?;
        let keep: Vec<usize> = (0..self.len()).filter(|&i| groups[i] == group).collect();
        if keep.is_empty() {
            return None;
        }
        Some(Self {
            scores: keep.iter().map(|&i| self.scores[i]).collect(),
            labels: keep.iter().map(|&i| self.labels[i]).collect(),
            groups: Some(vec![group; keep.len()]),
        })
    }

    /// Concatenates several sets; the result is tagged only if every part is.
    pub fn concat(parts: &[ScoreSet]) -> Result<Self> {
        let mut scores = Vec::new();
        let mut labels = Vec::new();
        let mut groups = Some(Vec::new());
        for p in parts {
            scores.extend_from_slice(&p.scores);
            labels.extend_from_slice(&p.labels);
            groups = match (groups, &p.groups) {
                (Some(mut acc), Some(g)) => {
                    acc.extend_from_slice(g);
                    Some(acc)
                }
                _ => None,
            };
        }
        Self::build(scores, labels, groups)
    }
}

/// Runs of equal scores in `order` (which must be sorted by score).
pub(crate) fn tie_blocks<'a>(
    scores: &'a [f64],
    order: &'a [usize],
) -> impl Iterator<Item = &'a [usize]> + 'a {
    order.chunk_by(move |&a, &b| scores[a].total_cmp(&scores[b]) == Ordering::Equal)
}
