use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure classes, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Input text could not be parsed.
    Parse,
    /// Input parsed but is inconsistent (unknown labels, overlapping sets, ...).
    Semantic,
    /// The embedded worked example diverged from its golden tables.
    Golden,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid label {label:?}: {reason}")]
    InvalidLabel { label: String, reason: &'static str },

    #[error("duplicate {axis} label {label:?}")]
    DuplicateLabel { axis: &'static str, label: String },

    #[error("row {test:?} has {found} cells, expected {expected}")]
    RaggedRow {
        test: String,
        expected: usize,
        found: usize,
    },

    #[error("column index {index} out of range for row {test:?} ({width} statements)")]
    ColumnOutOfRange {
        test: String,
        index: usize,
        width: usize,
    },

    #[error("unknown test case {0:?}")]
    UnknownTest(String),

    #[error("unknown test cases: {}", .0.join(", "))]
    UnknownTests(Vec<String>),

    #[error("unknown statements: {}", .0.join(", "))]
    UnknownStatements(Vec<String>),

    #[error("statements both deleted and modified: {}", .0.join(", "))]
    Overlap(Vec<String>),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: row has {found} cells, expected {expected}")]
    CsvRagged {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: cell ({test}, {statement}) is {value:?}, expected 0 or 1")]
    NonBinaryCell {
        line: usize,
        test: String,
        statement: String,
        value: String,
    },

    #[error("empty input")]
    EmptyInput,

    #[error("malformed diff at line {line}: {message}")]
    MalformedDiff { line: usize, message: String },

    #[error("malformed LCOV record for test {test:?} at line {line}: {message}")]
    MalformedLcov {
        test: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Mismatch(String),

    #[error("report is missing {0}")]
    MissingField(&'static str),

    #[error("report decode failed: {0}")]
    ReportDecode(String),

    #[error("golden mismatch in {table}: {detail}")]
    GoldenMismatch { table: String, detail: String },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidLabel { .. }
            | Error::DuplicateLabel { .. }
            | Error::RaggedRow { .. }
            | Error::Syntax { .. }
            | Error::CsvRagged { .. }
            | Error::NonBinaryCell { .. }
            | Error::EmptyInput
            | Error::MalformedDiff { .. }
            | Error::MalformedLcov { .. }
            | Error::ReportDecode(_) => ErrorClass::Parse,
            Error::ColumnOutOfRange { .. }
            | Error::UnknownTest(_)
            | Error::UnknownTests(_)
            | Error::UnknownStatements(_)
            | Error::Overlap(_)
            | Error::Mismatch(_)
            | Error::MissingField(_) => ErrorClass::Semantic,
            Error::GoldenMismatch { .. } => ErrorClass::Golden,
        }
    }
}
