use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Largest sample size for which the p-value is computed by enumerating
/// every permutation.
pub const EXACT_PERMUTATION_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpearmanResult {
    pub rho: f64,
    /// Two-sided.
    pub p_value: f64,
}

/// 1-based ranks, tied values sharing the average of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

/// Spearman's rank correlation with a two-sided p-value: exact permutation
/// for `n <= 8`, Student-t approximation with `n - 2` degrees of freedom above.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<SpearmanResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "y values",
            expected: x.len(),
            found: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::Undefined(format!("spearman needs at least 3 pairs, got {n}")));
    }
    if is_constant(x) {
        return Err(Error::Undefined("x is constant".into()));
    }
    if is_constant(y) {
        return Err(Error::Undefined("y is constant".into()));
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let rho = pearson(&rx, &ry);
    let p_value = if n <= EXACT_PERMUTATION_MAX_N {
        exact_p_value(&rx, &ry, rho)
    } else {
        t_p_value(rho, n)
    };
    Ok(SpearmanResult { rho, p_value })
}

fn t_p_value(rho: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    if rho.abs() >= 1.0 {
        return 0.0;
    }
    let t = rho * (df / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    (2.0 * dist.cdf(-t.abs())).min(1.0)
}

/// Share of all permutations of `ry` whose |rho| reaches the observed one.
fn exact_p_value(rx: &[f64], ry: &[f64], rho: f64) -> f64 {
    let mut perm = ry.to_vec();
    let n = perm.len();
    let threshold = rho.abs() - 1e-12;
    let (mut hits, mut total) = (0u64, 0u64);
    let mut check = |p: &[f64]| {
        total += 1;
        if pearson(rx, p).abs() >= threshold {
            hits += 1;
        }
    };
    // Heap's algorithm
    let mut c = vec![0usize; n];
    check(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            check(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn average_ranks_handle_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
    }

    #[test]
    fn hand_example() {
        let r = spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r.rho - 0.8).abs() < 1e-12);
        // permutations with |rho| >= 0.8 among 24: rho = ±1 (2) and ±0.8 (3 + 3)
        assert!((r.p_value - 8.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_extremes() {
        let x: Vec<f64> = (0..20).map(f64::from).collect();
        let up: Vec<f64> = x.iter().map(|v| v * v).collect();
        let down: Vec<f64> = x.iter().map(|v| -v.exp()).collect();
        let r = spearman(&x, &up).unwrap();
        assert_eq!(r.rho, 1.0);
        assert_eq!(r.p_value, 0.0);
        assert_eq!(spearman(&x, &down).unwrap().rho, -1.0);
    }

    #[test]
    fn undefined_inputs() {
        assert!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(spearman(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]).is_err());
        assert!(spearman(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn t_approximation_is_sane() {
        let x: Vec<f64> = (0..30).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| (v * 7.0) % 30.0).collect();
        let r = spearman(&x, &y).unwrap();
        assert!(r.p_value > 0.0 && r.p_value <= 1.0);
    }
}
