//! Per-test LCOV tracefiles to a coverage matrix.
//!
//! Only `SF:`, `DA:` and `end_of_record` matter. A statement is labelled
//! `<file>:<line>` and counts as covered when its hit count is positive.
//! Columns appear in order of first mention across the records.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::matrix::{CoverageMatrix, StatementId, TestCaseId};

#[derive(Debug, Clone)]
pub struct LcovImport {
    pub matrix: CoverageMatrix,
    pub notices: Vec<String>,
}

pub fn import_lcov<S: AsRef<str>>(records: &[(TestCaseId, S)]) -> Result<LcovImport> {
    let mut columns: Vec<StatementId> = Vec::new();
    let mut column_of: HashMap<String, usize> = HashMap::new();
    let mut tests = Vec::with_capacity(records.len());
    let mut rows = Vec::with_capacity(records.len());
    let mut seen_tests = HashSet::new();
    let mut ignored: BTreeSet<&str> = BTreeSet::new();

    for (test, text) in records {
        if !seen_tests.insert(test.clone()) {
            return Err(Error::DuplicateLabel {
                axis: "test",
                label: test.to_string(),
            });
        }
        let malformed = |line: usize, message: String| Error::MalformedLcov {
            test: test.to_string(),
            line,
            message,
        };
        let mut file: Option<&str> = None;
        let mut row = Vec::new();
        for (i, raw) in text.as_ref().lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            if raw == "end_of_record" {
                file = None;
                continue;
            }
            let Some((tag, value)) = raw.split_once(':') else {
                return Err(malformed(line, format!("unrecognized line {raw:?}")));
            };
            match tag {
                "SF" => file = Some(value.trim()),
                "DA" => {
                    let f = file.ok_or_else(|| malformed(line, "DA record outside SF block".into()))?;
                    let mut parts = value.split(',');
                    let number: u64 = parts
                        .next()
                        .and_then(|s| s.trim().parse().ok())
                        .ok_or_else(|| malformed(line, format!("bad line number in {raw:?}")))?;
                    let hits: i64 = parts
                        .next()
                        .and_then(|s| s.trim().parse().ok())
                        .ok_or_else(|| malformed(line, format!("bad hit count in {raw:?}")))?;
                    let key = format!("{f}:{number}");
                    let col = match column_of.get(&key) {
                        Some(&c) => c,
                        None => {
                            let label = StatementId::new(&key)
                                .map_err(|e| malformed(line, e.to_string()))?;
                            column_of.insert(key, columns.len());
                            columns.push(label);
                            columns.len() - 1
                        }
                    };
                    if hits > 0 {
                        row.push(col);
                    }
                }
                "FN" | "FNDA" | "FNF" | "FNH" | "BRDA" | "BRF" | "BRH" => {
                    ignored.insert(tag);
                }
                _ => {}
            }
        }
        tests.push(test.clone());
        rows.push(row);
    }

    let mut notices = Vec::new();
    if !ignored.is_empty() {
        let tags: Vec<&str> = ignored.into_iter().collect();
        notices.push(format!(
            "ignored function/branch records ({}); only statement coverage is used",
            tags.join(", ")
        ));
    }
    Ok(LcovImport {
        matrix: CoverageMatrix::from_sparse(tests, columns, rows)?,
        notices,
    })
}
