use std::path::Path;

use auclab_core::exec::Execution;
use auclab_core::io::{expand_path, write_bands, write_changes, write_trajectories, ExperimentConfig};
use auclab_core::optimizer::{run_seeds, SeedRun};
use auclab_core::{Error, Metric, Result};

use crate::output::{opt, write_file};

fn with_context(arm: &str, e: Error) -> Error {
    match e {
        Error::InvalidConfig(m) => Error::InvalidConfig(format!("arm {arm}: {m}")),
        Error::Undefined(m) => Error::Undefined(format!("arm {arm}: {m}")),
        Error::Rescale(m) => Error::Rescale(format!("arm {arm}: {m}")),
        other => other,
    }
}

pub fn run(config: &Path) -> Result<()> {
    let cfg = ExperimentConfig::load(config)?;
    cfg.check_optimize()?;
    let out = &cfg.output;
    for arm in &cfg.arms {
        let label = arm.label.as_str();
        let runs = run_seeds(&cfg.dataset, &arm.config, &cfg.seeds, Execution::default())
            .map_err(|e| with_context(label, e))?;
        let path = |template: &str| expand_path(template, None, Some(label));
        if let Some(t) = &out.trajectory {
            write_file(&path(t), |f| write_trajectories(&runs, f))?;
        }
        if let Some(t) = &out.bands {
            write_file(&path(t), |f| write_bands(&runs, f))?;
        }
        if let Some(t) = &out.changes {
            write_file(&path(t), |f| write_changes(&runs, f))?;
        }

        let n = runs.len() as f64;
        let mean = |f: &dyn Fn(&SeedRun) -> Option<f64>| -> Option<f64> {
            let vals: Option<Vec<f64>> = runs.iter().map(f).collect();
            vals.map(|v| v.iter().sum::<f64>() / n)
        };
        let steps = runs.iter().map(|r| r.trajectory.steps.len() - 1).max().unwrap_or(0);
        let mut line = format!(
            "arm {label}: {} seeds, {} steps, final mean auroc overall {}",
            runs.len(),
            steps,
            opt(mean(&|r| Some(r.trajectory.last().overall(Metric::Auroc))))
        );
        if let Some(first) = runs.first() {
            for &g in first.trajectory.steps[0].groups.keys() {
                let v = mean(&|r| r.trajectory.last().group(g, Metric::Auroc));
                line.push_str(&format!(", group {g} {}", opt(v)));
            }
        }
        let converged = runs.iter().filter(|r| r.trajectory.converged).count();
        if converged > 0 {
            line.push_str(&format!("; {converged} seed(s) ran out of mistakes early"));
        }
        println!("{line}");
    }
    Ok(())
}
