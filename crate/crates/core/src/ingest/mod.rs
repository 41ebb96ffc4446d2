//! Readers for matrices, change specs, diffs and LCOV tracefiles.

pub mod changeset;
pub mod csv;
pub mod diff;
pub mod lcov;

pub use self::changeset::{parse_change_document, parse_changeset, write_changeset, ChangeSource, ChangeSpecDocument};
pub use self::csv::{parse_matrix_csv, write_matrix_csv};
pub use self::diff::{derive_changeset_from_diff, DerivedChanges, LineMap};
pub use self::lcov::{import_lcov, LcovImport};
