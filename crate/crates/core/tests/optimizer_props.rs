mod common;

use auclab_core::optimizer::{
    displacement, run, run_seeds, sample_bounded_permutation, OptimizerConfig, Procedure,
};
use auclab_core::synthgen::{DatasetSpec, GroupSpec};
use auclab_core::{Execution, Metric};
use common::random_strict;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn procedures() -> [Procedure; 3] {
    [
        Procedure::Noise {
            delta_max: 0.05,
            candidates: 10,
        },
        Procedure::FixMistakes,
        Procedure::Permute {
            gamma: 3,
            candidates: 5,
        },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn objective_never_decreases(seed in any::<u64>(), n in 10usize..60, objective_is_auprc in any::<bool>()) {
        let objective = if objective_is_auprc { Metric::Auprc } else { Metric::Auroc };
        let s = random_strict(seed, n, 0.3);
        for procedure in procedures() {
            let cfg = OptimizerConfig::new(procedure, objective, 8);
            let t = run(&s, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            for w in t.steps.windows(2) {
                let (a, b) = (w[0].overall(objective), w[1].overall(objective));
                if procedure == Procedure::FixMistakes {
                    prop_assert!(b > a);
                } else {
                    prop_assert!(b >= a);
                }
            }
        }
    }

    #[test]
    fn permutations_respect_the_bound(seed in any::<u64>(), n in 1usize..150, gamma in 1usize..5) {
        let (perm, _) = sample_bounded_permutation(n, gamma, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        prop_assert!(displacement(&perm) <= gamma);
    }
}

#[test]
fn fixing_mistakes_converges_to_perfect_ranking() {
    let s = random_strict(3, 30, 0.3);
    let cfg = OptimizerConfig::new(Procedure::FixMistakes, Metric::Auroc, 10_000);
    let t = run(&s, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert!(t.converged);
    assert_eq!(t.last().overall(Metric::Auroc), 1.0);
}

#[test]
fn seeds_are_reproducible_and_execution_independent() {
    let ds = DatasetSpec::Groups(GroupSpec::two_group_disparity(60, 0.85));
    let seeds: Vec<u64> = (0..6).collect();
    for procedure in procedures() {
        let mut cfg = OptimizerConfig::new(procedure, Metric::Auprc, 5);
        cfg.execution = Execution::Sequential;
        let a = run_seeds(&ds, &cfg, &seeds, Execution::Sequential).unwrap();
        cfg.execution = Execution::Parallel;
        let b = run_seeds(&ds, &cfg, &seeds, Execution::Parallel).unwrap();
        assert_eq!(a, b, "{procedure:?}");
    }
}

/// Share of fixed mistakes with both members in the higher-prevalence group.
fn within_high_share(objective: Metric) -> f64 {
    let ds = DatasetSpec::Groups(GroupSpec::two_group_disparity(200, 0.85));
    let cfg = OptimizerConfig::new(Procedure::FixMistakes, objective, 50);
    let seeds: Vec<u64> = (0..20).collect();
    let runs = run_seeds(&ds, &cfg, &seeds, Execution::default()).unwrap();
    let (mut within, mut total) = (0usize, 0usize);
    for r in &runs {
        for m in r.trajectory.mistakes() {
            total += 1;
            within += usize::from(m.within_group(1));
        }
    }
    within as f64 / total as f64
}

#[test]
fn auprc_fixes_favor_the_higher_prevalence_group() {
    let auprc_share = within_high_share(Metric::Auprc);
    let auroc_share = within_high_share(Metric::Auroc);
    assert!(
        auprc_share > auroc_share,
        "auprc {auprc_share} vs auroc {auroc_share}"
    );
}
