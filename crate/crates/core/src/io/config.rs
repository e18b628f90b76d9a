//! Experiment configuration files.
//!
//! A config is a TOML document with the sections `synth` or `groups` (the
//! dataset), `optimizer`, `seeds` and `output`. Validation collects every
//! problem before failing; unknown sections and keys are problems.

use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::Metric;
use crate::optimizer::{
    OptimizerConfig, Procedure, DEFAULT_GAMMA, DEFAULT_NOISE_CANDIDATES, DEFAULT_PERMUTE_CANDIDATES,
};
use crate::synthgen::{DatasetSpec, GroupParams, GroupSpec, RescaleMap, SynthConfig};

const SECTIONS: [&str; 5] = ["synth", "groups", "optimizer", "seeds", "output"];

/// One optimizer setting; a noise `delta_grid` yields one arm per value.
#[derive(Debug, Clone, PartialEq)]
pub struct Arm {
    pub label: String,
    pub config: OptimizerConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutputPaths {
    pub scores: Option<String>,
    pub trajectory: Option<String>,
    pub bands: Option<String>,
    pub changes: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    /// Empty when the config has no `optimizer` section.
    pub arms: Vec<Arm>,
    pub seeds: Vec<u64>,
    pub output: OutputPaths,
}

/// Reads one section's keys, recording problems instead of stopping.
struct Section<'a> {
    name: &'static str,
    table: &'a Table,
    used: Vec<&'static str>,
}

impl<'a> Section<'a> {
    fn new(name: &'static str, table: &'a Table) -> Self {
        Self {
            name,
            table,
            used: Vec::new(),
        }
    }

    fn raw(&mut self, key: &'static str, required: bool, errors: &mut Vec<String>) -> Option<&'a Value> {
        self.used.push(key);
        let v = self.table.get(key);
        if v.is_none() && required {
            errors.push(format!("[{}] missing required key `{key}`", self.name));
        }
        v
    }

    fn typed<T>(
        &mut self,
        key: &'static str,
        required: bool,
        expected: &str,
        errors: &mut Vec<String>,
        convert: impl Fn(&'a Value) -> Option<T>,
    ) -> Option<T> {
        let name = self.name;
        let v = self.raw(key, required, errors)?;
        let out = convert(v);
        if out.is_none() {
            errors.push(format!("[{name}] `{key}` must be {expected}, found `{v}`"));
        }
        out
    }

    fn float(&mut self, key: &'static str, required: bool, errors: &mut Vec<String>) -> Option<f64> {
        self.typed(key, required, "a number", errors, as_float)
    }

    fn count(&mut self, key: &'static str, required: bool, errors: &mut Vec<String>) -> Option<usize> {
        self.typed(key, required, "a non-negative integer", errors, |v| {
            v.as_integer().and_then(|i| usize::try_from(i).ok())
        })
    }

    fn boolean(&mut self, key: &'static str, errors: &mut Vec<String>) -> Option<bool> {
        self.typed(key, false, "true or false", errors, Value::as_bool)
    }

    fn string(&mut self, key: &'static str, required: bool, errors: &mut Vec<String>) -> Option<&'a str> {
        self.typed(key, required, "a string", errors, Value::as_str)
    }

    fn floats(&mut self, key: &'static str, required: bool, errors: &mut Vec<String>) -> Option<Vec<f64>> {
        self.typed(key, required, "an array of numbers", errors, |v| {
            v.as_array()?.iter().map(as_float).collect()
        })
    }

    fn integers(&mut self, key: &'static str, required: bool, errors: &mut Vec<String>) -> Option<Vec<u64>> {
        self.typed(key, required, "an array of non-negative integers", errors, |v| {
            v.as_array()?
                .iter()
                .map(|x| x.as_integer().and_then(|i| u64::try_from(i).ok()))
                .collect()
        })
    }

    fn finish(self, errors: &mut Vec<String>) {
        for key in self.table.keys() {
            if !self.used.contains(&key.as_str()) {
                errors.push(format!("[{}] unknown key `{key}`", self.name));
            }
        }
    }
}

fn as_float(v: &Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

fn rescale_map(name: &str) -> Option<RescaleMap> {
    match name {
        "linear" => Some(RescaleMap::Linear),
        "power" => Some(RescaleMap::Power),
        "logit_shift" => Some(RescaleMap::LogitShift),
        _ => None,
    }
}

fn parse_rescale(sec: &mut Section, errors: &mut Vec<String>) -> (bool, RescaleMap) {
    let on = sec.boolean("rescale_to_prevalence", errors).unwrap_or(false);
    let name = sec.name;
    let map = match sec.string("rescale_map", false, errors) {
        None => RescaleMap::default(),
        Some(s) => rescale_map(s).unwrap_or_else(|| {
            errors.push(format!(
                "[{name}] `rescale_map` must be one of linear, power, logit_shift; found `{s}`"
            ));
            RescaleMap::default()
        }),
    };
    (on, map)
}

fn parse_synth(table: &Table, errors: &mut Vec<String>) -> Option<DatasetSpec> {
    let mut sec = Section::new("synth", table);
    let n_total = sec.count("n_total", true, errors);
    let prevalence = sec.float("prevalence", true, errors);
    let target_auroc = sec.float("target_auroc", true, errors);
    let (rescale_to_prevalence, rescale_map) = parse_rescale(&mut sec, errors);
    sec.finish(errors);
    let cfg = SynthConfig {
        n_total: n_total?,
        prevalence: prevalence?,
        target_auroc: target_auroc?,
        rescale_to_prevalence,
        rescale_map,
    };
    if let Err(e) = cfg.validate() {
        errors.push(format!("[synth] {e}"));
    }
    Some(DatasetSpec::Single(cfg))
}

fn parse_groups(table: &Table, errors: &mut Vec<String>) -> Option<DatasetSpec> {
    let mut sec = Section::new("groups", table);
    let ids = sec.integers("ids", true, errors);
    let n = sec.integers("n", true, errors);
    let prevalence = sec.floats("prevalence", true, errors);
    let target_auroc = sec.floats("target_auroc", true, errors);
    let (rescale_to_prevalence, rescale_map) = parse_rescale(&mut sec, errors);
    sec.finish(errors);
    let (ids, n, prevalence, target_auroc) = (ids?, n?, prevalence?, target_auroc?);
    if n.len() != ids.len() || prevalence.len() != ids.len() || target_auroc.len() != ids.len() {
        errors.push(format!(
            "[groups] `ids`, `n`, `prevalence` and `target_auroc` must have equal lengths, found {}, {}, {}, {}",
            ids.len(),
            n.len(),
            prevalence.len(),
            target_auroc.len()
        ));
        return None;
    }
    let mut groups = Vec::with_capacity(ids.len());
    for i in 0..ids.len() {
        let Ok(id) = u32::try_from(ids[i]) else {
            errors.push(format!("[groups] id {} does not fit in 32 bits", ids[i]));
            return None;
        };
        groups.push(GroupParams {
            id,
            n: n[i] as usize,
            prevalence: prevalence[i],
            target_auroc: target_auroc[i],
        });
    }
    let spec = GroupSpec {
        groups,
        rescale_to_prevalence,
        rescale_map,
    };
    if let Err(e) = spec.validate() {
        errors.push(format!("[groups] {e}"));
    }
    Some(DatasetSpec::Groups(spec))
}

fn parse_optimizer(table: &Table, errors: &mut Vec<String>) -> Vec<Arm> {
    let mut sec = Section::new("optimizer", table);
    let procedure = sec.string("procedure", true, errors);
    let objective = sec.string("objective", true, errors);
    let steps = sec.count("steps", true, errors);
    let gamma = sec.count("gamma", false, errors);
    let candidates = sec.count("candidates", false, errors);
    let delta_max = sec.float("delta_max", false, errors);
    let delta_grid = sec.floats("delta_grid", false, errors);
    let execution = sec.string("execution", false, errors);
    sec.finish(errors);

    let objective = objective.and_then(|o| match o.parse::<Metric>() {
        Ok(m) => Some(m),
        Err(_) => {
            errors.push(format!("[optimizer] `objective` must be auroc or auprc, found `{o}`"));
            None
        }
    });
    let execution = match execution {
        None => Execution::default(),
        Some("parallel") => Execution::Parallel,
        Some("sequential") => Execution::Sequential,
        Some(other) => {
            errors.push(format!(
                "[optimizer] `execution` must be parallel or sequential, found `{other}`"
            ));
            Execution::default()
        }
    };
    let unused = |key: &str, present: bool, proc_name: &str, errors: &mut Vec<String>| {
        if present {
            errors.push(format!("[optimizer] `{key}` does not apply to procedure {proc_name}"));
        }
    };

    let procedures: Vec<(String, Procedure)> = match procedure {
        None => return Vec::new(),
        Some("noise") => {
            unused("gamma", gamma.is_some(), "noise", errors);
            let candidates = candidates.unwrap_or(DEFAULT_NOISE_CANDIDATES);
            match (delta_max, delta_grid) {
                (Some(_), Some(_)) => {
                    errors.push("[optimizer] give either `delta_max` or `delta_grid`, not both".into());
                    Vec::new()
                }
                (None, None) => {
                    errors.push("[optimizer] noise needs `delta_max` or `delta_grid`".into());
                    Vec::new()
                }
                (Some(d), None) => vec![(
                    "noise".into(),
                    Procedure::Noise {
                        delta_max: d,
                        candidates,
                    },
                )],
                (None, Some(grid)) => {
                    if grid.is_empty() {
                        errors.push("[optimizer] `delta_grid` is empty".into());
                    }
                    grid.into_iter()
                        .map(|d| {
                            (
                                format!("delta{d}"),
                                Procedure::Noise {
                                    delta_max: d,
                                    candidates,
                                },
                            )
                        })
                        .collect()
                }
            }
        }
        Some("fix_mistakes") => {
            unused("gamma", gamma.is_some(), "fix_mistakes", errors);
            unused("candidates", candidates.is_some(), "fix_mistakes", errors);
            unused("delta_max", delta_max.is_some(), "fix_mistakes", errors);
            unused("delta_grid", delta_grid.is_some(), "fix_mistakes", errors);
            vec![("fix_mistakes".into(), Procedure::FixMistakes)]
        }
        Some("permute") => {
            unused("delta_max", delta_max.is_some(), "permute", errors);
            unused("delta_grid", delta_grid.is_some(), "permute", errors);
            vec![(
                "permute".into(),
                Procedure::Permute {
                    gamma: gamma.unwrap_or(DEFAULT_GAMMA),
                    candidates: candidates.unwrap_or(DEFAULT_PERMUTE_CANDIDATES),
                },
            )]
        }
        Some(other) => {
            errors.push(format!(
                "[optimizer] unknown procedure `{other}`; expected noise, fix_mistakes or permute"
            ));
            Vec::new()
        }
    };
    let (Some(objective), Some(steps)) = (objective, steps) else {
        return Vec::new();
    };
    let mut arms = Vec::with_capacity(procedures.len());
    for (label, procedure) in procedures {
        let config = OptimizerConfig {
            procedure,
            objective,
            steps,
            execution,
        };
        match config.validate() {
            Ok(()) => arms.push(Arm { label, config }),
            Err(e) => errors.push(format!("[optimizer] {e}")),
        }
    }
    arms
}

fn parse_seeds(table: &Table, errors: &mut Vec<String>) -> Vec<u64> {
    let mut sec = Section::new("seeds", table);
    let list = sec.integers("list", false, errors);
    let start = sec.count("start", false, errors);
    let count = sec.count("count", false, errors);
    sec.finish(errors);
    let seeds = match (list, start, count) {
        (Some(list), None, None) => list,
        (None, start, Some(count)) => {
            let start = start.unwrap_or(0) as u64;
            (start..start + count as u64).collect()
        }
        (None, Some(_), None) => {
            errors.push("[seeds] `start` needs `count`".into());
            return Vec::new();
        }
        (None, None, None) => {
            errors.push("[seeds] give `list` or `count`".into());
            return Vec::new();
        }
        _ => {
            errors.push("[seeds] give either `list` or `start`/`count`, not both".into());
            return Vec::new();
        }
    };
    if seeds.is_empty() {
        errors.push("[seeds] no seeds selected".into());
    }
    seeds
}

fn parse_output(table: &Table, errors: &mut Vec<String>) -> OutputPaths {
    let mut sec = Section::new("output", table);
    let out = OutputPaths {
        scores: sec.string("scores", false, errors).map(str::to_string),
        trajectory: sec.string("trajectory", false, errors).map(str::to_string),
        bands: sec.string("bands", false, errors).map(str::to_string),
        changes: sec.string("changes", false, errors).map(str::to_string),
    };
    sec.finish(errors);
    out
}

fn section<'a>(doc: &'a Table, name: &str, errors: &mut Vec<String>) -> Option<&'a Table> {
    match doc.get(name) {
        None => None,
        Some(Value::Table(t)) => Some(t),
        Some(other) => {
            errors.push(format!("`{name}` must be a section, found `{other}`"));
            None
        }
    }
}

impl ExperimentConfig {
    /// Parses and validates a config document.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Schema(vec![e.to_string().trim_end().to_string()]))?;
        let mut errors = Vec::new();
        for key in doc.keys() {
            if !SECTIONS.contains(&key.as_str()) {
                errors.push(format!("unknown section `{key}`"));
            }
        }
        let synth = section(&doc, "synth", &mut errors);
        let groups = section(&doc, "groups", &mut errors);
        let dataset = match (synth, groups) {
            (Some(t), None) => parse_synth(t, &mut errors),
            (None, Some(t)) => parse_groups(t, &mut errors),
            (Some(_), Some(_)) => {
                errors.push("give either [synth] or [groups], not both".into());
                None
            }
            (None, None) => {
                errors.push("missing dataset section: [synth] or [groups]".into());
                None
            }
        };
        let arms = section(&doc, "optimizer", &mut errors)
            .map(|t| parse_optimizer(t, &mut errors))
            .unwrap_or_default();
        let seeds = match section(&doc, "seeds", &mut errors) {
            Some(t) => parse_seeds(t, &mut errors),
            None => {
                errors.push("missing section [seeds]".into());
                Vec::new()
            }
        };
        let output = section(&doc, "output", &mut errors)
            .map(|t| parse_output(t, &mut errors))
            .unwrap_or_default();
        match dataset {
            Some(dataset) if errors.is_empty() => Ok(Self {
                dataset,
                arms,
                seeds,
                output,
            }),
            _ => Err(Error::Schema(errors)),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Checks what `synth` needs: a score path, with `{seed}` when several
    /// seeds are run.
    pub fn check_synth(&self) -> Result<&str> {
        let Some(path) = self.output.scores.as_deref() else {
            return Err(Error::Schema(vec!["[output] missing required key `scores`".into()]));
        };
        if self.seeds.len() > 1 && !path.contains("{seed}") {
            return Err(Error::Schema(vec![format!(
                "[output] `scores` must contain {{seed}} when {} seeds are run",
                self.seeds.len()
            )]));
        }
        Ok(path)
    }

    /// Checks what `optimize` needs: an optimizer section, trajectory and band
    /// paths, and `{arm}` in every path when there are several arms.
    pub fn check_optimize(&self) -> Result<()> {
        let mut errors = Vec::new();
        if self.arms.is_empty() {
            errors.push("missing section [optimizer]".into());
        }
        let o = &self.output;
        for (key, path, required) in [
            ("trajectory", &o.trajectory, true),
            ("bands", &o.bands, true),
            ("changes", &o.changes, false),
        ] {
            match path {
                None if required => errors.push(format!("[output] missing required key `{key}`")),
                Some(p) if self.arms.len() > 1 && !p.contains("{arm}") => errors.push(format!(
                    "[output] `{key}` must contain {{arm}} when the config has {} arms",
                    self.arms.len()
                )),
                _ => {}
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Schema(errors))
        }
    }
}

/// Substitutes `{seed}` and `{arm}` in an output path template.
pub fn expand_path(template: &str, seed: Option<u64>, arm: Option<&str>) -> PathBuf {
    let mut s = template.to_string();
    if let Some(seed) = seed {
        s = s.replace("{seed}", &seed.to_string());
    }
    if let Some(arm) = arm {
        s = s.replace("{arm}", arm);
    }
    PathBuf::from(s)
}
