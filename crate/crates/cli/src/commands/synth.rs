use std::path::Path;

use auclab_core::analysis::per_group_metrics;
use auclab_core::io::{canonicalize, expand_path, format_value, write_scores, ExperimentConfig};
use auclab_core::metrics::auroc;
use auclab_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::output::{opt, write_file};

pub fn run(config: &Path) -> Result<()> {
    let cfg = ExperimentConfig::load(config)?;
    let template = cfg.check_synth()?;
    for &seed in &cfg.seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = canonicalize(&cfg.dataset.generate(&mut rng)?)?;
        if !set.is_strict() {
            return Err(Error::Rescale(format!(
                "seed {seed}: two scores coincide once written at 9 significant digits"
            )));
        }
        let path = expand_path(template, Some(seed), None);
        write_file(&path, |f| write_scores(&set, f))?;

        let mut summary = format!(
            "seed {seed}: {} rows ({} positive) -> {}; auroc joint {}",
            set.len(),
            set.n_pos(),
            path.display(),
            format_value(auroc(&set)?)
        );
        if set.groups().is_some() {
            for (g, m) in per_group_metrics(&set)? {
                summary.push_str(&format!(", group {g} {}", opt(m.auroc)));
            }
        }
        println!("{summary}");
    }
    Ok(())
}
