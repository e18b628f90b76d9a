use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use auclab_core::io::{read_scores, row_line, ScoreFile};
use auclab_core::{Error, Result};
use serde::Serialize;

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_err(path, e))
}

/// Runs `write` against a fresh file at `path`.
pub fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut f = create(path)?;
    write(&mut f)?;
    f.flush().map_err(|e| io_err(path, e))
}

pub fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Reads a score CSV, naming the path in parse errors and warning on
/// repeated scores.
pub fn load_scores(path: &Path) -> Result<ScoreFile> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let parsed = read_scores(file).map_err(|e| match e {
        Error::Parse { line, message } => io_err(path, format!("line {line}: {message}")),
        other => other,
    })?;
    for d in &parsed.duplicates {
        eprintln!(
            "warning: line {} repeats the score {} from line {}",
            d.second_line, d.score, d.first_line
        );
    }
    Ok(parsed)
}

/// Tie errors restated with the file's line numbers.
pub fn with_lines(path: &Path, e: Error) -> Error {
    match e {
        Error::TiedScores { first, second, score } => io_err(
            path,
            format!(
                "lines {} and {} share the score {score}; distinct scores are required",
                row_line(first),
                row_line(second)
            ),
        ),
        other => other,
    }
}

pub fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    })?;
    println!("{text}");
    Ok(())
}

/// `value` formatted canonically, or `undefined`.
pub fn opt(v: Option<f64>) -> String {
    v.map(auclab_core::io::format_value)
        .unwrap_or_else(|| "undefined".into())
}
