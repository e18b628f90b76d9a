use std::collections::BTreeMap;

use auclab_core::analysis::fixtures::PlantedSweep;
use auclab_core::analysis::{signed_gap, spearman, sweep_correlations, GroupMetrics};
use auclab_core::{Execution, Metric};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn spearman_ignores_monotone_transforms(
        pairs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 3..40),
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let Ok(base) = spearman(&x, &y) else { return Ok(()) };
        let tx: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let ty: Vec<f64> = y.iter().map(|v| v.powi(3) + 2.0 * v).collect();
        let moved = spearman(&tx, &ty).unwrap();
        prop_assert!((moved.rho - base.rho).abs() < 1e-12);
        prop_assert!((moved.p_value - base.p_value).abs() < 1e-9);
        let flipped: Vec<f64> = y.iter().map(|v| -v).collect();
        prop_assert!((spearman(&x, &flipped).unwrap().rho + base.rho).abs() < 1e-12);
    }

    #[test]
    fn signed_gap_follows_prevalence_not_ids(
        pa in 0.01f64..0.5, pb in 0.01f64..0.5, ma in 0.5f64..1.0, mb in 0.5f64..1.0,
    ) {
        prop_assume!(pa != pb);
        let gm = |prevalence, auroc| GroupMetrics {
            n: 100,
            n_pos: 10,
            prevalence,
            auroc: Some(auroc),
            auprc: Some(auroc),
            missing: None,
        };
        let one = BTreeMap::from([(1, gm(pa, ma)), (2, gm(pb, mb))]);
        let relabelled = BTreeMap::from([(1, gm(pb, mb)), (2, gm(pa, ma))]);
        let swapped_metrics = BTreeMap::from([(1, gm(pa, mb)), (2, gm(pb, ma))]);
        let g = signed_gap(&one, Metric::Auroc).unwrap();
        prop_assert_eq!(signed_gap(&relabelled, Metric::Auroc).unwrap(), g);
        prop_assert!((signed_gap(&swapped_metrics, Metric::Auroc).unwrap() + g).abs() < 1e-15);
        let expected = if pa > pb { ma - mb } else { mb - ma };
        prop_assert!((g - expected).abs() < 1e-15);
    }
}

#[test]
fn planted_relation_is_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let planted = PlantedSweep::default();
    let recovered = (0..30)
        .filter(|_| {
            let recs = planted.generate(&mut rng);
            sweep_correlations(&recs, Execution::default())
                .unwrap()
                .mean_difference
                > 0.0
        })
        .count();
    assert!(recovered >= 29, "{recovered}/30");
}

#[test]
fn null_fixture_centres_on_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let null = PlantedSweep {
        gap_auprc_rho: 0.0,
        ..PlantedSweep::default()
    };
    let s = sweep_correlations(&null.generate(&mut rng), Execution::Sequential).unwrap();
    let (lo, hi) = s.ci95.unwrap();
    assert!(lo < 0.0 && hi > 0.0, "{lo} {hi}");
}
