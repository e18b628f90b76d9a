use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use auclab_core::analysis::{meta_correlation, sweep_correlations, RunRecord, SpearmanResult, SweepSummary};
use auclab_core::exec::Execution;
use auclab_core::io::{format_value, read_run_records};
use auclab_core::{Error, Result};
use serde::Serialize;

use crate::output::{io_err, print_json};

#[derive(Serialize)]
struct Report {
    datasets: Vec<SweepSummary>,
    /// Spearman of prevalence ratio against mean difference across datasets.
    meta_correlation: Option<SpearmanResult>,
}

fn load(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_run_records(file).map_err(|e| match e {
        Error::MissingColumns(cols) => io_err(path, format!("missing column(s): {}", cols.join(", "))),
        Error::Parse { line, message } => io_err(path, format!("line {line}: {message}")),
        other => other,
    })
}

pub fn run(inputs: &[PathBuf], json: bool) -> Result<()> {
    let mut by_dataset: BTreeMap<String, Vec<RunRecord>> = BTreeMap::new();
    for path in inputs {
        for r in load(path)? {
            by_dataset.entry(r.dataset.clone()).or_default().push(r);
        }
    }
    let datasets = by_dataset
        .values()
        .map(|records| sweep_correlations(records, Execution::default()))
        .collect::<Result<Vec<_>>>()?;
    let meta_correlation = if datasets.len() >= 3 {
        let points: Vec<(f64, f64)> = datasets
            .iter()
            .map(|d| (d.prevalence_ratio, d.mean_difference))
            .collect();
        Some(meta_correlation(&points)?)
    } else {
        None
    };
    let report = Report {
        datasets,
        meta_correlation,
    };
    if json {
        return print_json(&report);
    }
    for d in &report.datasets {
        println!(
            "dataset {}: higher-prevalence group {}, prevalence ratio {}",
            d.dataset,
            d.higher_prevalence_group,
            format_value(d.prevalence_ratio)
        );
        println!("  split  n  rho(gap, auprc)  rho(gap, auroc)  difference");
        for s in &d.splits {
            println!(
                "  {}  {}  {}  {}  {}",
                s.split,
                s.n_runs,
                format_value(s.gap_vs_auprc.rho),
                format_value(s.gap_vs_auroc.rho),
                format_value(s.difference)
            );
        }
        match d.ci95 {
            Some((lo, hi)) => println!(
                "  mean difference {} (95% CI {} to {}, {})",
                format_value(d.mean_difference),
                format_value(lo),
                format_value(hi),
                d.ci_method
            ),
            None => println!(
                "  mean difference {} (one split, no interval)",
                format_value(d.mean_difference)
            ),
        }
    }
    match &report.meta_correlation {
        Some(m) => println!(
            "meta-correlation of prevalence ratio and mean difference: rho {} (p {})",
            format_value(m.rho),
            format_value(m.p_value)
        ),
        None if report.datasets.len() > 1 => println!(
            "meta-correlation needs at least 3 datasets; got {}",
            report.datasets.len()
        ),
        None => {}
    }
    Ok(())
}
