//! Score files: header `score,label` or `score,label,group`, one sample per row.

use std::collections::HashMap;
use std::io::{Read, Write};

use super::format::format_value;
use crate::error::{Error, Result};
use crate::metrics::ScoreSet;

/// File line of the `i`-th data row (the header is line 1).
pub fn row_line(index: usize) -> u64 {
    index as u64 + 2
}

/// Two rows carrying the same score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuplicateScore {
    pub first_line: u64,
    pub second_line: u64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreFile {
    pub set: ScoreSet,
    /// Each repeated score paired with the line of its first occurrence.
    pub duplicates: Vec<DuplicateScore>,
}

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a score CSV, enforcing score-set invariants row by row.
pub fn read_scores<R: Read>(input: R) -> Result<ScoreFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    let has_group = match names.as_slice() {
        ["score", "label"] => false,
        ["score", "label", "group"] => true,
        _ => {
            return Err(parse_err(
                1,
                format!(
                    "header must be `score,label` or `score,label,group`, found `{}`",
                    names.join(",")
                ),
            ))
        }
    };

    let mut scores = Vec::new();
    let mut labels = Vec::new();
    let mut groups = Vec::new();
    let mut first_seen: HashMap<u64, u64> = HashMap::new();
    let mut duplicates = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let score: f64 = record[0]
            .parse()
            .map_err(|_| parse_err(line, format!("score `{}` is not a number", &record[0])))?;
        if !(score > 0.0 && score < 1.0) {
            return Err(parse_err(line, format!("score {} is outside (0, 1)", &record[0])));
        }
        let label = match &record[1] {
            "0" => false,
            "1" => true,
            other => return Err(parse_err(line, format!("label `{other}` is not 0 or 1"))),
        };
        if has_group {
            let g: u32 = record[2].parse().map_err(|_| {
                parse_err(line, format!("group `{}` is not a non-negative integer", &record[2]))
            })?;
            groups.push(g);
        }
        if let Some(&first_line) = first_seen.get(&score.to_bits()) {
            duplicates.push(DuplicateScore {
                first_line,
                second_line: line,
                score,
            });
        } else {
            first_seen.insert(score.to_bits(), line);
        }
        scores.push(score);
        labels.push(label);
    }
    let set = if has_group {
        ScoreSet::with_groups(scores, labels, groups)?
    } else {
        ScoreSet::new(scores, labels)?
    };
    Ok(ScoreFile { set, duplicates })
}

/// Writes the canonical form: fixed header, [`format_value`] scores, LF endings.
pub fn write_scores<W: Write>(set: &ScoreSet, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| Error::Io {
        path: "<scores>".into(),
        message: e.to_string(),
    };
    match set.groups() {
        Some(groups) => {
            w.write_record(["score", "label", "group"]).map_err(io)?;
            for ((s, l), g) in set.scores().iter().zip(set.labels()).zip(groups) {
                w.write_record([format_value(*s), u8::from(*l).to_string(), g.to_string()])
                    .map_err(io)?;
            }
        }
        None => {
            w.write_record(["score", "label"]).map_err(io)?;
            for (s, l) in set.scores().iter().zip(set.labels()) {
                w.write_record([format_value(*s), u8::from(*l).to_string()]).map_err(io)?;
            }
        }
    }
    w.flush().map_err(|e| Error::Io {
        path: "<scores>".into(),
        message: e.to_string(),
    })
}

/// The set with every score replaced by its canonical written value.
pub fn canonicalize(set: &ScoreSet) -> Result<ScoreSet> {
    let scores = set
        .scores()
        .iter()
        .map(|s| format_value(*s).parse().expect("formatted value parses"))
        .collect();
    set.with_scores(scores)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let text = "score,label,group\n0.100000000,0,1\n0.350000000,1,2\n0.400000000,0,1\n0.800000000,1,2\n";
        let parsed = read_scores(text.as_bytes()).unwrap();
        assert!(parsed.duplicates.is_empty());
        let mut out = Vec::new();
        write_scores(&parsed.set, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn out_of_range_names_line() {
        let err = read_scores("score,label\n0.2,0\n1.5,1\n".as_bytes()).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "score 1.5 is outside (0, 1)".into()
            }
        );
    }

    #[test]
    fn bad_label_and_header() {
        let err = read_scores("score,label\n0.2,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_scores("s,label\n0.2,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = read_scores("score,label,group\n0.2,1,-3\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("group"), "{err}");
    }

    #[test]
    fn duplicates_are_flagged() {
        let f = read_scores("score,label\n0.3,0\n0.5,1\n0.3,1\n".as_bytes()).unwrap();
        assert_eq!(
            f.duplicates,
            vec![DuplicateScore {
                first_line: 2,
                second_line: 4,
                score: 0.3
            }]
        );
    }
}
