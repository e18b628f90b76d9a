//! Brute-force oracles and random score-set builders shared by the
//! integration tests.
#![allow(dead_code)]

use auclab_core::ScoreSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Strict set with `n` samples, about `prevalence` positives and at least one
/// of each class.
pub fn random_strict(seed: u64, n: usize, prevalence: f64) -> ScoreSet {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scores: Vec<f64> = Vec::with_capacity(n);
    while scores.len() < n {
        let s: f64 = rng.random_range(1e-6..1.0 - 1e-6);
        if !scores.contains(&s) {
            scores.push(s);
        }
    }
    let n_pos = ((n as f64 * prevalence).round() as usize).clamp(1, n - 1);
    let mut labels: Vec<bool> = (0..n).map(|i| i < n_pos).collect();
    labels.shuffle(&mut rng);
    ScoreSet::new(scores, labels).unwrap()
}

/// Set whose scores come from a small grid, so ties are common.
pub fn random_tied(seed: u64, n: usize) -> ScoreSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scores: Vec<f64> = (0..n).map(|_| rng.random_range(1..10) as f64 / 10.0).collect();
    let mut labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
    labels[0] = true;
    labels[n - 1] = false;
    ScoreSet::new(scores, labels).unwrap()
}

/// Pairwise Mann-Whitney count over every (positive, negative) pair.
pub fn auroc_pairwise(s: &ScoreSet) -> f64 {
    let (mut doubled, mut pairs) = (0u64, 0u64);
    for (i, &si) in s.scores().iter().enumerate() {
        if !s.labels()[i] {
            continue;
        }
        for (j, &sj) in s.scores().iter().enumerate() {
            if s.labels()[j] {
                continue;
            }
            pairs += 1;
            doubled += if si > sj { 2 } else if si == sj { 1 } else { 0 };
        }
    }
    doubled as f64 / (2 * pairs) as f64
}

/// Average precision walking the descending sort one rank at a time.
/// Only meaningful for strict sets.
pub fn ap_by_rank(s: &ScoreSet) -> f64 {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&a, &b| s.scores()[b].total_cmp(&s.scores()[a]));
    let mut tp = 0usize;
    let mut total = 0.0;
    for (k, &i) in idx.iter().enumerate() {
        if s.labels()[i] {
            tp += 1;
            total += tp as f64 / (k + 1) as f64;
        }
    }
    total / s.n_pos() as f64
}

/// Average precision with inclusive thresholds, valid with ties.
pub fn ap_inclusive(s: &ScoreSet) -> f64 {
    let mut total = 0.0;
    for (i, &si) in s.scores().iter().enumerate() {
        if !s.labels()[i] {
            continue;
        }
        let fired = s.scores().iter().filter(|&&x| x >= si).count();
        let tp = s
            .scores()
            .iter()
            .zip(s.labels())
            .filter(|(&x, &l)| l && x >= si)
            .count();
        total += tp as f64 / fired as f64;
    }
    total / s.n_pos() as f64
}

/// `(position, positive sample, negative sample)` for every adjacent (1, 0)
/// pair of the full ascending sort.
pub fn mistakes_brute(s: &ScoreSet) -> Vec<(usize, usize, usize)> {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&a, &b| s.scores()[a].total_cmp(&s.scores()[b]));
    (0..idx.len().saturating_sub(1))
        .filter(|&k| s.labels()[idx[k]] && !s.labels()[idx[k + 1]])
        .map(|k| (k, idx[k], idx[k + 1]))
        .collect()
}

/// Closed-form AUPRC gain of fixing the mistake whose positive sits at
/// ascending position `pos`: `TP / (N_P * C * (C - 1))`, with `C` the samples
/// scoring at or above the positive and `TP` the positives among them.
pub fn auprc_gain_closed_form(s: &ScoreSet, pos: usize) -> f64 {
    let n = s.len();
    let c = n - pos;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| s.scores()[a].total_cmp(&s.scores()[b]));
    let tp = idx[pos..].iter().filter(|&&i| s.labels()[i]).count();
    tp as f64 / (s.n_pos() * c * (c - 1)) as f64
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let en = ((n * m) as f64 / (n + m) as f64).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * d;
    if lambda < 0.2 {
        return (d, 1.0);
    }
    let mut p = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-1.0f64).powi(k - 1) * (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        p += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    (d, p.clamp(0.0, 1.0))
}
