//! Matrix CSV: a header row of statement labels behind an empty corner cell,
//! then one row per test with `0`/`1` cells. Comma separated, no quoting.

use crate::error::{Error, Result};
use crate::matrix::{CoverageMatrix, StatementId, TestCaseId};

pub fn parse_matrix_csv(bytes: &[u8]) -> Result<CoverageMatrix> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Syntax {
        line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        message: "input is not valid UTF-8".into(),
    })?;
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut lines = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
    let mut head = header.split(',');
    let corner = head.next().unwrap_or("").trim();
    if !corner.is_empty() {
        return Err(Error::Syntax {
            line: 1,
            message: format!("corner cell must be empty, found {corner:?}"),
        });
    }
    let statements = head
        .map(|s| StatementId::new(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    let width = statements.len();

    let mut tests = Vec::new();
    let mut rows = Vec::new();
    for (line, text) in lines {
        if text.trim().is_empty() {
            continue;
        }
        let mut cells = text.split(',');
        let test = TestCaseId::new(cells.next().unwrap_or("").trim())?;
        let cells: Vec<&str> = cells.map(str::trim).collect();
        if cells.len() != width {
            return Err(Error::CsvRagged {
                line,
                expected: width + 1,
                found: cells.len() + 1,
            });
        }
        let mut row = Vec::new();
        for (i, cell) in cells.iter().enumerate() {
            match *cell {
                "1" => row.push(i),
                "0" => {}
                other => {
                    return Err(Error::NonBinaryCell {
                        line,
                        test: test.to_string(),
                        statement: statements[i].to_string(),
                        value: other.to_string(),
                    })
                }
            }
        }
        tests.push(test);
        rows.push(row);
    }
    CoverageMatrix::from_sparse(tests, statements, rows)
}

/// Canonical form: LF endings, one trailing newline, no trailing separators.
pub fn write_matrix_csv(m: &CoverageMatrix) -> Vec<u8> {
    let mut out = String::with_capacity((m.n_tests() + 1) * (2 * m.n_statements() + 8));
    for s in m.statements() {
        out.push(',');
        out.push_str(s.as_str());
    }
    out.push('\n');
    for (r, t) in m.tests().iter().enumerate() {
        out.push_str(t.as_str());
        let mut next = m.row(r).iter().peekable();
        for c in 0..m.n_statements() as u32 {
            if next.peek() == Some(&&c) {
                next.next();
                out.push_str(",1");
            } else {
                out.push_str(",0");
            }
        }
        out.push('\n');
    }
    out.into_bytes()
}
