mod common;

use auclab_core::io::{canonicalize, read_scores, write_scores, ExperimentConfig};
use auclab_core::Error;
use common::random_strict;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_files_round_trip_byte_for_byte(seed in any::<u64>(), n in 2usize..200, grouped in any::<bool>()) {
        let mut s = random_strict(seed, n, 0.2);
        if grouped {
            s = s.tagged((0..n as u32).map(|i| i % 3).collect()).unwrap();
        }
        let mut first = Vec::new();
        write_scores(&s, &mut first).unwrap();
        let parsed = read_scores(first.as_slice()).unwrap();
        prop_assert_eq!(&parsed.set, &canonicalize(&s).unwrap());
        let mut second = Vec::new();
        write_scores(&parsed.set, &mut second).unwrap();
        prop_assert_eq!(first, second);
    }
}

#[test]
fn files_use_lf_endings() {
    let s = random_strict(0, 10, 0.3);
    let mut out = Vec::new();
    write_scores(&s, &mut out).unwrap();
    assert!(!out.contains(&b'\r'));
    assert!(out.ends_with(b"\n"));
}

#[test]
fn shipped_configs_parse() {
    for name in ["two_group_fix_mistakes.cfg", "two_group_permute.cfg"] {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../docs/configs")
            .join(name);
        let cfg = ExperimentConfig::load(&path).unwrap();
        assert_eq!(cfg.seeds.len(), 20);
        cfg.check_optimize().unwrap();
    }
}

#[test]
fn unknown_procedure_is_a_schema_error() {
    let text = "[synth]\nn_total = 10\nprevalence = 0.2\ntarget_auroc = 0.8\n\
                [optimizer]\nprocedure = \"gradient\"\nobjective = \"auroc\"\nsteps = 3\n\
                [seeds]\nlist = [1]\n";
    let err = ExperimentConfig::parse(text).unwrap_err();
    assert!(err.is_config());
    let Error::Schema(problems) = err else { unreachable!() };
    assert_eq!(problems.len(), 1);
    assert!(problems[0].contains("gradient"));
}
