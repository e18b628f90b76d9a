//! Run-record input and long-format experiment output.

use std::io::{Read, Write};

use super::format::format_value;
use crate::analysis::{percentile_band, RunRecord};
use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::optimizer::SeedRun;

/// Columns every run-record file must carry.
pub const RUN_RECORD_COLUMNS: [&str; 11] = [
    "split",
    "run_id",
    "seed",
    "val_auroc",
    "val_auprc",
    "test_auroc_a",
    "test_auroc_b",
    "test_auprc_a",
    "test_auprc_b",
    "prevalence_a",
    "prevalence_b",
];

/// Columns read when present.
pub const RUN_RECORD_OPTIONAL: [&str; 3] = ["dataset", "group_weight", "hyperparams"];

fn write_err(e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: "<output>".into(),
        message: e.to_string(),
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// Reads run records, reporting every missing required column at once.
pub fn read_run_records<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let missing: Vec<String> = RUN_RECORD_COLUMNS
        .iter()
        .filter(|c| !header.iter().any(|h| h == **c))
        .map(|c| c.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingColumns(missing));
    }
    let mut out = Vec::new();
    for row in reader.deserialize::<RunRecord>() {
        out.push(row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?);
    }
    if out.is_empty() {
        return Err(Error::Empty);
    }
    Ok(out)
}

pub fn write_run_records<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = writer(out);
    let mut header: Vec<&str> = vec!["dataset"];
    header.extend(RUN_RECORD_COLUMNS);
    header.extend(["group_weight", "hyperparams"]);
    w.write_record(&header).map_err(write_err)?;
    for r in records {
        let opt = |v: Option<f64>| v.map(format_value).unwrap_or_default();
        w.write_record([
            r.dataset.clone(),
            r.split.clone(),
            r.run_id.clone(),
            r.seed.to_string(),
            format_value(r.val_auroc),
            format_value(r.val_auprc),
            format_value(r.test_auroc_a),
            format_value(r.test_auroc_b),
            format_value(r.test_auprc_a),
            format_value(r.test_auprc_b),
            format_value(r.prevalence_a),
            format_value(r.prevalence_b),
            opt(r.group_weight),
            r.hyperparams.clone().unwrap_or_default(),
        ])
        .map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}

/// A metric series tracked through a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scope {
    Overall,
    Group(u32),
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scope::Overall => f.write_str("overall"),
            Scope::Group(g) => write!(f, "group:{g}"),
        }
    }
}

const METRICS: [Metric; 2] = [Metric::Auroc, Metric::Auprc];

/// Scopes present in the runs: overall, then each group id ascending.
fn scopes(runs: &[SeedRun]) -> Vec<Scope> {
    let mut out = vec![Scope::Overall];
    if let Some(first) = runs.first().and_then(|r| r.trajectory.steps.first()) {
        out.extend(first.groups.keys().map(|&g| Scope::Group(g)));
    }
    out
}

fn value_at(run: &SeedRun, step: usize, scope: Scope, metric: Metric) -> Option<f64> {
    let record = &run.trajectory.steps[step];
    match scope {
        Scope::Overall => Some(record.overall(metric)),
        Scope::Group(g) => record.group(g, metric),
    }
}

/// `seed,step,scope,metric,value`, one row per recorded value. Metrics that
/// are undefined for a group are omitted.
pub fn write_trajectories<W: Write>(runs: &[SeedRun], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["seed", "step", "scope", "metric", "value"])
        .map_err(write_err)?;
    let scopes = scopes(runs);
    for run in runs {
        for (step, record) in run.trajectory.steps.iter().enumerate() {
            for &scope in &scopes {
                for metric in METRICS {
                    if let Some(v) = value_at(run, step, scope, metric) {
                        w.write_record([
                            run.seed.to_string(),
                            record.step.to_string(),
                            scope.to_string(),
                            metric.name().to_string(),
                            format_value(v),
                        ])
                        .map_err(write_err)?;
                    }
                }
            }
        }
    }
    w.flush().map_err(write_err)
}

/// `step,scope,metric,p05,mean,p95` across seeds. A trajectory that stopped
/// early contributes its final value to every later step.
pub fn write_bands<W: Write>(runs: &[SeedRun], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["step", "scope", "metric", "p05", "mean", "p95"])
        .map_err(write_err)?;
    let steps = runs
        .iter()
        .map(|r| r.trajectory.steps.len())
        .max()
        .unwrap_or(0);
    for scope in scopes(runs) {
        for metric in METRICS {
            let per_step: Vec<Vec<f64>> = (0..steps)
                .map(|step| {
                    runs.iter()
                        .filter_map(|r| {
                            let last = r.trajectory.steps.len() - 1;
                            value_at(r, step.min(last), scope, metric)
                        })
                        .collect()
                })
                .collect();
            if per_step.iter().any(Vec::is_empty) {
                continue;
            }
            for (step, band) in percentile_band(&per_step, 5.0, 95.0)?.into_iter().enumerate() {
                w.write_record([
                    step.to_string(),
                    scope.to_string(),
                    metric.name().to_string(),
                    format_value(band.lo),
                    format_value(band.mean),
                    format_value(band.hi),
                ])
                .map_err(write_err)?;
            }
        }
    }
    w.flush().map_err(write_err)
}

/// `seed,step,change`: what each step altered.
pub fn write_changes<W: Write>(runs: &[SeedRun], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["seed", "step", "change"]).map_err(write_err)?;
    for run in runs {
        for record in &run.trajectory.steps {
            w.write_record([
                run.seed.to_string(),
                record.step.to_string(),
                record.change.describe(),
            ])
            .map_err(write_err)?;
        }
    }
    w.flush().map_err(write_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "split,run_id,seed,val_auroc,val_auprc,test_auroc_a,test_auroc_b,test_auprc_a,test_auprc_b,prevalence_a,prevalence_b";

    #[test]
    fn missing_columns_listed_together() {
        let text = "split,run_id,seed,val_auroc\ns0,r0,1,0.7\n";
        let err = read_run_records(text.as_bytes()).unwrap_err();
        let Error::MissingColumns(cols) = err else { panic!("{err}") };
        assert_eq!(cols.len(), 7);
        assert!(cols.contains(&"val_auprc".to_string()));
    }

    #[test]
    fn optional_columns_default() {
        let text = format!("{HEADER}\ns0,r0,1,0.7,0.2,0.8,0.7,0.3,0.1,0.2,0.05\n");
        let recs = read_run_records(text.as_bytes()).unwrap();
        assert_eq!(recs[0].dataset, "default");
        assert_eq!(recs[0].group_weight, None);
    }

    #[test]
    fn run_records_round_trip() {
        let text = format!("{HEADER}\ns0,r0,1,0.7,0.2,0.8,0.7,0.3,0.1,0.2,0.05\n");
        let recs = read_run_records(text.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_run_records(&recs, &mut out).unwrap();
        assert_eq!(read_run_records(out.as_slice()).unwrap(), recs);
    }

    #[test]
    fn scope_labels() {
        assert_eq!(Scope::Overall.to_string(), "overall");
        assert_eq!(Scope::Group(2).to_string(), "group:2");
    }
}
