//! JSONL corpus reader and writer.
//!
//! One JSON object per line:
//!
//! ```text
//! {"id":"q1","scores":[0.9,0.1],"correct":{"small":true,"large":true},"answer_rank":1,"meta":{"split":"test"}}
//! ```
//!
//! `answer_rank` and `meta` are optional. Scores need not be sorted on disk.
//! Blank lines are skipped.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::score::{NegativeScores, ScoreDistribution};
use crate::types::QueryRecord;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: malformed record: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: invalid record: {message}")]
    Validation { line: usize, message: String },
    #[error("line {line}: arm labels {found:?} differ from {expected:?} on earlier lines")]
    InconsistentArms { line: usize, expected: Vec<String>, found: Vec<String> },
}

impl CorpusError {
    pub fn line(&self) -> Option<usize> {
        match self {
            CorpusError::Io(_) => None,
            CorpusError::Parse { line, .. }
            | CorpusError::Validation { line, .. }
            | CorpusError::InconsistentArms { line, .. } => Some(*line),
        }
    }
}

/// Why a single line was rejected.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecordError {
    #[error("malformed record: {0}")]
    Parse(String),
    #[error("invalid record: {0}")]
    Validation(String),
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    scores: Vec<f64>,
    correct: BTreeMap<String, bool>,
    #[serde(default)]
    answer_rank: Option<i64>,
    #[serde(default)]
    meta: Option<BTreeMap<String, String>>,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    id: &'a str,
    scores: &'a [f64],
    correct: &'a BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    answer_rank: Option<u32>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    meta: &'a BTreeMap<String, String>,
}

/// Parses and validates one corpus line.
pub fn parse_record_line(line: &str, policy: NegativeScores) -> Result<QueryRecord, RecordError> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| RecordError::Parse(e.to_string()))?;
    let distribution =
        ScoreDistribution::from_vec(raw.scores, policy).map_err(|e| RecordError::Validation(e.to_string()))?;
    let answer_rank = match raw.answer_rank {
        None => None,
        Some(r) if r >= 1 && r <= i64::from(u32::MAX) => Some(r as u32),
        Some(r) => return Err(RecordError::Validation(format!("answer_rank must be a positive integer, got {r}"))),
    };
    Ok(QueryRecord { id: raw.id, distribution, correct: raw.correct, answer_rank, meta: raw.meta.unwrap_or_default() })
}

/// Reads a whole corpus, rejecting it at the first bad line.
pub fn load_records<R: BufRead>(reader: R, policy: NegativeScores) -> Result<Vec<QueryRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut arms: Option<BTreeSet<String>> = None;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = parse_record_line(&line, policy).map_err(|e| match e {
            RecordError::Parse(message) => CorpusError::Parse { line: line_no, message },
            RecordError::Validation(message) => CorpusError::Validation { line: line_no, message },
        })?;
        let names: BTreeSet<String> = record.correct.keys().cloned().collect();
        match &arms {
            None => arms = Some(names),
            Some(expected) if *expected != names => {
                return Err(CorpusError::InconsistentArms {
                    line: line_no,
                    expected: expected.iter().cloned().collect(),
                    found: names.into_iter().collect(),
                })
            }
            Some(_) => {}
        }
        records.push(record);
    }
    Ok(records)
}

pub fn load_records_from_path(path: &Path, policy: NegativeScores) -> Result<Vec<QueryRecord>, CorpusError> {
    load_records(BufReader::new(File::open(path)?), policy)
}

/// Arm names labelled in the corpus (identical on every line once loaded).
pub fn corpus_arms(records: &[QueryRecord]) -> Vec<String> {
    records.first().map(|r| r.correct.keys().cloned().collect()).unwrap_or_default()
}

pub fn write_record<W: Write>(mut w: W, record: &QueryRecord) -> io::Result<()> {
    let out = RecordOut {
        id: &record.id,
        scores: record.distribution.scores(),
        correct: &record.correct,
        answer_rank: record.answer_rank,
        meta: &record.meta,
    };
    serde_json::to_writer(&mut w, &out)?;
    w.write_all(b"\n")
}

pub fn write_records<W: Write>(mut w: W, records: &[QueryRecord]) -> io::Result<()> {
    for r in records {
        write_record(&mut w, r)?;
    }
    w.flush()
}
