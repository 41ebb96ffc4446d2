//! Test × statement coverage matrices.
//!
//! A [`CoverageMatrix`] is an immutable boolean incidence matrix whose row
//! and column label orders are part of its value. Every operation returns a
//! new matrix and keeps the relative order of surviving rows and columns,
//! which is what later tie-breaking relies on.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

fn check_label(label: &str) -> Result<()> {
    let reason = if label.is_empty() {
        "label is empty"
    } else if label.contains(',') {
        "label contains a comma"
    } else if label.chars().any(char::is_whitespace) {
        "label contains whitespace"
    } else {
        return Ok(());
    };
    Err(Error::InvalidLabel {
        label: label.to_string(),
        reason,
    })
}

macro_rules! label_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        ///
        /// The derived `Ord` is lexicographic and only used for set storage;
        /// matrix operations order labels by their position in the matrix.
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            /// Labels are non-empty tokens without commas or whitespace.
            pub fn new(label: impl AsRef<str>) -> Result<Self> {
                let label = label.as_ref();
                check_label(label)?;
                Ok(Self(Arc::from(label)))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl Label for $name {
            fn parse_label(s: &str) -> Result<Self> {
                Self::new(s)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(&*self.0, f)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                $name::new(s).map_err(serde::de::Error::custom)
            }
        }
    };
}

label_type!(
    /// Label of one statement (matrix column), e.g. `S7` or `src/lib.rs:42`.
    StatementId
);
label_type!(
    /// Label of one test case (matrix row), e.g. `T10`.
    TestCaseId
);

/// Row and column label types.
pub trait Label: Sized {
    fn parse_label(s: &str) -> Result<Self>;
}

/// Parse a whitespace- or comma-separated list of labels.
pub fn labels<T: Label>(text: &str) -> Result<Vec<T>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(T::parse_label)
        .collect()
}

/// Boolean test × statement incidence matrix with ordered label axes.
///
/// Rows are stored sparsely as sorted column positions.
#[derive(Clone)]
pub struct CoverageMatrix {
    tests: Vec<TestCaseId>,
    statements: Vec<StatementId>,
    rows: Vec<Vec<u32>>,
    test_pos: HashMap<TestCaseId, usize>,
    statement_pos: HashMap<StatementId, usize>,
}

impl PartialEq for CoverageMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.tests == other.tests && self.statements == other.statements && self.rows == other.rows
    }
}

impl Eq for CoverageMatrix {}

impl fmt::Debug for CoverageMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CoverageMatrix {}x{}", self.tests.len(), self.statements.len())?;
        for (t, row) in self.tests.iter().zip(&self.rows) {
            let cols: Vec<&str> = row
                .iter()
                .map(|&c| self.statements[c as usize].as_str())
                .collect();
            writeln!(f, "  {t}: {}", cols.join(" "))?;
        }
        Ok(())
    }
}

fn index_labels<L: Clone + Eq + std::hash::Hash + fmt::Display>(
    labels: &[L],
    axis: &'static str,
) -> Result<HashMap<L, usize>> {
    let mut pos = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if pos.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel {
                axis,
                label: l.to_string(),
            });
        }
    }
    Ok(pos)
}

impl CoverageMatrix {
    /// Build from dense boolean rows; `cells[i]` is the row of `tests[i]`.
    pub fn from_dense(
        tests: Vec<TestCaseId>,
        statements: Vec<StatementId>,
        cells: &[Vec<bool>],
    ) -> Result<Self> {
        if cells.len() != tests.len() {
            return Err(Error::Mismatch(format!(
                "{} rows supplied for {} tests",
                cells.len(),
                tests.len()
            )));
        }
        let width = statements.len();
        let mut rows = Vec::with_capacity(cells.len());
        for (t, row) in tests.iter().zip(cells) {
            if row.len() != width {
                return Err(Error::RaggedRow {
                    test: t.to_string(),
                    expected: width,
                    found: row.len(),
                });
            }
            rows.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v)
                    .map(|(i, _)| i as u32)
                    .collect(),
            );
        }
        Self::assemble(tests, statements, rows)
    }

    /// Build from sparse rows of covered column positions (any order, duplicates allowed).
    pub fn from_sparse(
        tests: Vec<TestCaseId>,
        statements: Vec<StatementId>,
        rows: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if rows.len() != tests.len() {
            return Err(Error::Mismatch(format!(
                "{} rows supplied for {} tests",
                rows.len(),
                tests.len()
            )));
        }
        let width = statements.len();
        let mut packed = Vec::with_capacity(rows.len());
        for (t, row) in tests.iter().zip(rows) {
            let mut cols = Vec::with_capacity(row.len());
            for c in row {
                if c >= width {
                    return Err(Error::ColumnOutOfRange {
                        test: t.to_string(),
                        index: c,
                        width,
                    });
                }
                cols.push(c as u32);
            }
            cols.sort_unstable();
            cols.dedup();
            packed.push(cols);
        }
        Self::assemble(tests, statements, packed)
    }

    fn assemble(
        tests: Vec<TestCaseId>,
        statements: Vec<StatementId>,
        rows: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let test_pos = index_labels(&tests, "test")?;
        let statement_pos = index_labels(&statements, "statement")?;
        Ok(Self {
            tests,
            statements,
            rows,
            test_pos,
            statement_pos,
        })
    }

    pub fn empty() -> Self {
        Self {
            tests: Vec::new(),
            statements: Vec::new(),
            rows: Vec::new(),
            test_pos: HashMap::new(),
            statement_pos: HashMap::new(),
        }
    }

    pub fn tests(&self) -> &[TestCaseId] {
        &self.tests
    }

    pub fn statements(&self) -> &[StatementId] {
        &self.statements
    }

    pub fn n_tests(&self) -> usize {
        self.tests.len()
    }

    pub fn n_statements(&self) -> usize {
        self.statements.len()
    }

    pub fn test_position(&self, t: &TestCaseId) -> Option<usize> {
        self.test_pos.get(t).copied()
    }

    pub fn statement_position(&self, s: &StatementId) -> Option<usize> {
        self.statement_pos.get(s).copied()
    }

    /// Sorted column positions covered by row `row`.
    pub fn row(&self, row: usize) -> &[u32] {
        &self.rows[row]
    }

    pub fn is_covered(&self, row: usize, col: usize) -> bool {
        self.rows[row].binary_search(&(col as u32)).is_ok()
    }

    /// Dense view of one row.
    pub fn dense_row(&self, row: usize) -> Vec<bool> {
        let mut out = vec![false; self.statements.len()];
        for &c in &self.rows[row] {
            out[c as usize] = true;
        }
        out
    }

    fn require_test(&self, t: &TestCaseId) -> Result<usize> {
        self.test_position(t)
            .ok_or_else(|| Error::UnknownTest(t.to_string()))
    }

    /// Number of statements test `t` covers.
    pub fn row_coverage_count(&self, t: &TestCaseId) -> Result<usize> {
        Ok(self.rows[self.require_test(t)?].len())
    }

    /// Statements covered by `t`, in column order.
    pub fn covered_statements(&self, t: &TestCaseId) -> Result<Vec<StatementId>> {
        let row = self.require_test(t)?;
        Ok(self.rows[row]
            .iter()
            .map(|&c| self.statements[c as usize].clone())
            .collect())
    }

    /// Row coverage counts in row order.
    pub fn row_counts(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// Drop the given columns. Every label must exist in the matrix.
    pub fn remove_statements<'a, I>(&self, drop: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a StatementId>,
    {
        let mut gone = vec![false; self.statements.len()];
        let mut unknown = Vec::new();
        for s in drop {
            match self.statement_position(s) {
                Some(p) => gone[p] = true,
                None => unknown.push(s.to_string()),
            }
        }
        if !unknown.is_empty() {
            return Err(Error::UnknownStatements(unknown));
        }
        Ok(self.retain_columns(&gone))
    }

    /// Drop the columns whose position is flagged in `gone`.
    pub(crate) fn retain_columns(&self, gone: &[bool]) -> Self {
        let mut remap = vec![u32::MAX; self.statements.len()];
        let mut statements = Vec::new();
        for (i, s) in self.statements.iter().enumerate() {
            if !gone[i] {
                remap[i] = statements.len() as u32;
                statements.push(s.clone());
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&c| remap[c as usize])
                    .filter(|&c| c != u32::MAX)
                    .collect()
            })
            .collect();
        let statement_pos = statements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self {
            tests: self.tests.clone(),
            statements,
            rows,
            test_pos: self.test_pos.clone(),
            statement_pos,
        }
    }

    /// Drop the given rows. Every label must exist in the matrix.
    pub fn remove_tests<'a, I>(&self, drop: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a TestCaseId>,
    {
        let mut gone = vec![false; self.tests.len()];
        let mut unknown = Vec::new();
        for t in drop {
            match self.test_position(t) {
                Some(p) => gone[p] = true,
                None => unknown.push(t.to_string()),
            }
        }
        if !unknown.is_empty() {
            return Err(Error::UnknownTests(unknown));
        }
        Ok(self.retain_rows(&gone))
    }

    pub(crate) fn retain_rows(&self, gone: &[bool]) -> Self {
        let mut tests = Vec::new();
        let mut rows = Vec::new();
        for (i, t) in self.tests.iter().enumerate() {
            if !gone[i] {
                tests.push(t.clone());
                rows.push(self.rows[i].clone());
            }
        }
        let test_pos = tests
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Self {
            tests,
            statements: self.statements.clone(),
            rows,
            test_pos,
            statement_pos: self.statement_pos.clone(),
        }
    }

    /// For each column, the rows that cover it.
    pub fn column_rows(&self) -> Vec<Vec<u32>> {
        let mut cols = vec![Vec::new(); self.statements.len()];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c as usize].push(r as u32);
            }
        }
        cols
    }

    /// Warnings for a well-formed matrix: empty axes and statements no test covers.
    pub fn findings(&self) -> Vec<Finding> {
        let mut out = Vec::new();
        if self.tests.is_empty() {
            out.push(Finding::NoTests);
        }
        if self.statements.is_empty() {
            out.push(Finding::NoStatements);
        }
        if !self.tests.is_empty() {
            let mut hit = vec![false; self.statements.len()];
            for row in &self.rows {
                for &c in row {
                    hit[c as usize] = true;
                }
            }
            let never: Vec<StatementId> = hit
                .iter()
                .enumerate()
                .filter(|(_, &h)| !h)
                .map(|(i, _)| self.statements[i].clone())
                .collect();
            if !never.is_empty() {
                out.push(Finding::UncoveredStatements(never));
            }
        }
        out
    }
}

/// Statements deleted and modified between two program versions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChangeSet {
    deleted: BTreeSet<StatementId>,
    modified: BTreeSet<StatementId>,
}

impl ChangeSet {
    /// Fails with [`Error::Overlap`] when a statement is in both sets.
    pub fn new<D, M>(deleted: D, modified: M) -> Result<Self>
    where
        D: IntoIterator<Item = StatementId>,
        M: IntoIterator<Item = StatementId>,
    {
        let deleted: BTreeSet<_> = deleted.into_iter().collect();
        let modified: BTreeSet<_> = modified.into_iter().collect();
        let both: Vec<String> = deleted
            .intersection(&modified)
            .map(|s| s.to_string())
            .collect();
        if !both.is_empty() {
            return Err(Error::Overlap(both));
        }
        Ok(Self { deleted, modified })
    }

    pub fn deleted(&self) -> &BTreeSet<StatementId> {
        &self.deleted
    }

    pub fn modified(&self) -> &BTreeSet<StatementId> {
        &self.modified
    }

    pub fn is_empty(&self) -> bool {
        self.deleted.is_empty() && self.modified.is_empty()
    }

    /// Check every label against `m`, listing all absent ones.
    pub fn check_against(&self, m: &CoverageMatrix) -> Result<()> {
        let unknown: Vec<String> = self
            .deleted
            .iter()
            .chain(&self.modified)
            .filter(|s| m.statement_position(s).is_none())
            .map(|s| s.to_string())
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::UnknownStatements(unknown))
        }
    }
}

/// Matrix contents before structural checks, as produced by a reader.
#[derive(Debug, Clone, Default)]
pub struct RawMatrix {
    pub statements: Vec<String>,
    pub rows: Vec<(String, Vec<bool>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    DuplicateTest(String),
    DuplicateStatement(String),
    InvalidLabel(String),
    RaggedRow {
        test: String,
        expected: usize,
        found: usize,
    },
    NoTests,
    NoStatements,
    UncoveredStatements(Vec<StatementId>),
}

impl Finding {
    pub fn is_error(&self) -> bool {
        !matches!(
            self,
            Finding::NoTests | Finding::NoStatements | Finding::UncoveredStatements(_)
        )
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::DuplicateTest(t) => write!(f, "duplicate test label {t}"),
            Finding::DuplicateStatement(s) => write!(f, "duplicate statement label {s}"),
            Finding::InvalidLabel(l) => write!(f, "invalid label {l:?}"),
            Finding::RaggedRow {
                test,
                expected,
                found,
            } => write!(f, "row {test} has {found} cells, expected {expected}"),
            Finding::NoTests => f.write_str("matrix has no tests"),
            Finding::NoStatements => f.write_str("matrix has no statements"),
            Finding::UncoveredStatements(s) => {
                let names: Vec<&str> = s.iter().map(StatementId::as_str).collect();
                write!(f, "statements covered by no test: {}", names.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        !self.findings.iter().any(Finding::is_error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| !f.is_error())
    }
}

/// Structural checks on raw matrix contents. Never fails; problems are findings.
pub fn validate(raw: &RawMatrix) -> ValidationReport {
    let mut findings = Vec::new();
    let mut seen = HashSet::new();
    for s in &raw.statements {
        if check_label(s).is_err() {
            findings.push(Finding::InvalidLabel(s.clone()));
        }
        if !seen.insert(s.as_str()) {
            findings.push(Finding::DuplicateStatement(s.clone()));
        }
    }
    let mut seen = HashSet::new();
    for (t, cells) in &raw.rows {
        if check_label(t).is_err() {
            findings.push(Finding::InvalidLabel(t.clone()));
        }
        if !seen.insert(t.as_str()) {
            findings.push(Finding::DuplicateTest(t.clone()));
        }
        if cells.len() != raw.statements.len() {
            findings.push(Finding::RaggedRow {
                test: t.clone(),
                expected: raw.statements.len(),
                found: cells.len(),
            });
        }
    }
    if findings.iter().any(Finding::is_error) {
        return ValidationReport { findings };
    }
    if raw.rows.is_empty() {
        findings.push(Finding::NoTests);
    }
    if raw.statements.is_empty() {
        findings.push(Finding::NoStatements);
    }
    ValidationReport { findings }
}

impl RawMatrix {
    pub fn into_matrix(self) -> Result<CoverageMatrix> {
        let statements = self
            .statements
            .iter()
            .map(StatementId::new)
            .collect::<Result<Vec<_>>>()?;
        let mut tests = Vec::with_capacity(self.rows.len());
        let mut cells = Vec::with_capacity(self.rows.len());
        for (t, row) in self.rows {
            tests.push(TestCaseId::new(t)?);
            cells.push(row);
        }
        CoverageMatrix::from_dense(tests, statements, &cells)
    }
}
