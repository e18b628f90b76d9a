use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use auclab_core::analysis::{per_group_metrics, GroupMetrics};
use auclab_core::io::format_value;
use auclab_core::metrics::{auprc, auprc_reparam, auroc, auroc_reparam, pr_curve, roc_curve, Curve};
use auclab_core::{Error, Result};
use serde::Serialize;

use crate::output::{load_scores, opt, print_json, write_file};

/// Expectation forms, present only for inputs with distinct scores.
#[derive(Serialize)]
struct Reparam {
    auroc: f64,
    auroc_residual: f64,
    auprc_precision_form: f64,
    auprc_bayes_form: f64,
    auprc_residual: f64,
}

#[derive(Serialize)]
struct Report {
    n: usize,
    n_pos: usize,
    n_neg: usize,
    prevalence: f64,
    auroc: f64,
    auprc: f64,
    reparam: Option<Reparam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    groups: Option<BTreeMap<u32, GroupMetrics>>,
}

fn write_curve(path: &Path, curve: &Curve, roc: bool) -> Result<()> {
    write_file(path, |f| {
        let header = if roc { "threshold,fpr,tpr" } else { "threshold,recall,precision" };
        let io = |e: std::io::Error| crate::output::io_err(path, e);
        writeln!(f, "{header}").map_err(io)?;
        for p in &curve.points {
            let (x, y) = if roc {
                (opt(p.fpr), format_value(p.tpr))
            } else {
                (format_value(p.tpr), opt(p.precision))
            };
            writeln!(f, "{},{x},{y}", format_value(p.threshold)).map_err(io)?;
        }
        Ok(())
    })
}

pub fn run(input: &Path, json: bool, per_group: bool, roc: Option<&Path>, pr: Option<&Path>) -> Result<()> {
    let s = load_scores(input)?.set;
    let auroc = auroc(&s)?;
    let auprc = auprc(&s)?;
    let reparam = if s.is_strict() {
        let a = auroc_reparam(&s)?;
        let forms = auprc_reparam(&s)?;
        Some(Reparam {
            auroc: a,
            auroc_residual: (a - auroc).abs(),
            auprc_precision_form: forms.precision_form,
            auprc_bayes_form: forms.bayes_form,
            auprc_residual: forms.residual(auprc),
        })
    } else {
        None
    };
    let groups = if per_group {
        if s.groups().is_none() {
            return Err(Error::InvalidConfig(
                "--per-group needs a `group` column in the input".into(),
            ));
        }
        Some(per_group_metrics(&s)?)
    } else {
        None
    };
    if let Some(path) = roc {
        write_curve(path, &roc_curve(&s)?, true)?;
    }
    if let Some(path) = pr {
        write_curve(path, &pr_curve(&s)?, false)?;
    }

    let report = Report {
        n: s.len(),
        n_pos: s.n_pos(),
        n_neg: s.n_neg(),
        prevalence: s.prevalence(),
        auroc,
        auprc,
        reparam,
        groups,
    };
    if json {
        return print_json(&report);
    }
    println!("n           {} ({} positive, {} negative)", report.n, report.n_pos, report.n_neg);
    println!("prevalence  {}", format_value(report.prevalence));
    println!("auroc       {}", format_value(auroc));
    println!("auprc       {}", format_value(auprc));
    match &report.reparam {
        Some(r) => {
            println!("auroc as 1 - E[FPR]            {}  residual {:.1e}", format_value(r.auroc), r.auroc_residual);
            println!("auprc as mean precision        {}", format_value(r.auprc_precision_form));
            println!("auprc as 1 - P(y=0) E[FPR/FR]  {}  residual {:.1e}", format_value(r.auprc_bayes_form), r.auprc_residual);
        }
        None => println!("expectation forms not computed: input has tied scores"),
    }
    if let Some(groups) = &report.groups {
        println!();
        println!("group  n  n_pos  prevalence  auroc  auprc");
        for (g, m) in groups {
            println!(
                "{g}  {}  {}  {}  {}  {}",
                m.n,
                m.n_pos,
                format_value(m.prevalence),
                opt(m.auroc),
                opt(m.auprc)
            );
        }
    }
    Ok(())
}
