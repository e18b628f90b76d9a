use std::path::Path;

use auclab_core::io::format_value;
use auclab_core::mistakes::{enumerate_mistakes, MistakeRecord};
use auclab_core::Result;
use serde::Serialize;

use crate::output::{load_scores, print_json, with_lines};

#[derive(Serialize)]
struct Row {
    /// 1-based ascending position of the positive member.
    position: usize,
    low_score: f64,
    high_score: f64,
    low_group: Option<u32>,
    high_group: Option<u32>,
    delta_auroc: f64,
    delta_auprc: f64,
}

impl From<&MistakeRecord> for Row {
    fn from(m: &MistakeRecord) -> Self {
        Self {
            position: m.low_index + 1,
            low_score: m.low_score,
            high_score: m.high_score,
            low_group: m.low_group,
            high_group: m.high_group,
            delta_auroc: m.delta_auroc,
            delta_auprc: m.delta_auprc,
        }
    }
}

fn group(g: Option<u32>) -> String {
    g.map(|g| g.to_string()).unwrap_or_else(|| "-".into())
}

pub fn run(input: &Path, json: bool) -> Result<()> {
    let s = load_scores(input)?.set;
    let mut mistakes = enumerate_mistakes(&s).map_err(|e| with_lines(input, e))?;
    mistakes.sort_by(|a, b| {
        b.delta_auprc
            .total_cmp(&a.delta_auprc)
            .then(a.low_index.cmp(&b.low_index))
    });
    let rows: Vec<Row> = mistakes.iter().map(Row::from).collect();
    if json {
        return print_json(&rows);
    }
    if rows.is_empty() {
        println!("no incorrectly ranked adjacent pairs: every positive outranks every negative next to it");
        return Ok(());
    }
    println!("position  low_score  high_score  low_group  high_group  delta_auroc  delta_auprc");
    for r in &rows {
        println!(
            "{}  {}  {}  {}  {}  {}  {}",
            r.position,
            format_value(r.low_score),
            format_value(r.high_score),
            group(r.low_group),
            group(r.high_group),
            format_value(r.delta_auroc),
            format_value(r.delta_auprc)
        );
    }
    Ok(())
}
