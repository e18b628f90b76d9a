//! File formats: score CSVs, run-record CSVs, long-format experiment output
//! and experiment configs. Every writer emits UTF-8 with LF line endings and
//! [`format_value`] numbers, so output is byte-stable.

pub mod config;
mod format;
mod records;
mod score_csv;

pub use config::{expand_path, Arm, ExperimentConfig, OutputPaths};
pub use format::{format_value, SIGNIFICANT_DIGITS};
pub use records::{
    read_run_records, write_bands, write_changes, write_run_records, write_trajectories, Scope,
    RUN_RECORD_COLUMNS, RUN_RECORD_OPTIONAL,
};
pub use score_csv::{canonicalize, read_scores, row_line, write_scores, DuplicateScore, ScoreFile};
