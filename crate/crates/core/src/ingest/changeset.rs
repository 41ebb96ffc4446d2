//! Change-spec files:
//!
//! ```text
//! # statements removed in the new version
//! deleted: S3 S4 S6 S8 S10 S13
//! modified: S2 S7 S15
//! ```
//!
//! Labels are separated by whitespace or commas. A key may appear more than
//! once; its lists are concatenated. Duplicates within a list collapse.

use crate::error::{Error, Result};
use crate::matrix::{labels, ChangeSet, StatementId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeSource {
    ExplicitFile,
    DerivedFromDiff,
}

/// Change lists as written, before normalization into a [`ChangeSet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeSpecDocument {
    pub deleted: Vec<StatementId>,
    pub modified: Vec<StatementId>,
    pub source: ChangeSource,
}

impl ChangeSpecDocument {
    pub fn normalize(self) -> Result<ChangeSet> {
        ChangeSet::new(self.deleted, self.modified)
    }
}

pub fn parse_change_document(bytes: &[u8]) -> Result<ChangeSpecDocument> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::Syntax {
        line: 1,
        message: "input is not valid UTF-8".into(),
    })?;
    let mut doc = ChangeSpecDocument {
        deleted: Vec::new(),
        modified: Vec::new(),
        source: ChangeSource::ExplicitFile,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, values) = content.split_once(':').ok_or_else(|| Error::Syntax {
            line,
            message: format!("expected `deleted:` or `modified:`, found {content:?}"),
        })?;
        let list = match key.trim() {
            "deleted" => &mut doc.deleted,
            "modified" => &mut doc.modified,
            other => {
                return Err(Error::Syntax {
                    line,
                    message: format!("unknown key {other:?}"),
                })
            }
        };
        let parsed = labels::<StatementId>(values).map_err(|e| Error::Syntax {
            line,
            message: e.to_string(),
        })?;
        list.extend(parsed);
    }
    Ok(doc)
}

pub fn parse_changeset(bytes: &[u8]) -> Result<ChangeSet> {
    parse_change_document(bytes)?.normalize()
}

/// Canonical text form: both keys, labels sorted, one line each.
pub fn write_changeset(c: &ChangeSet) -> String {
    let join = |s: &std::collections::BTreeSet<StatementId>| {
        s.iter().map(StatementId::as_str).collect::<Vec<_>>().join(" ")
    };
    format!(
        "deleted: {}\nmodified: {}\n",
        join(c.deleted()),
        join(c.modified())
    )
    .replace(": \n", ":\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sids(s: &str) -> Vec<StatementId> {
        labels::<StatementId>(s).unwrap()
    }

    #[test]
    fn worked_example() {
        let text = b"# example\ndeleted: S3, S4 S6 S8\ndeleted: S10 S13\n\nmodified: S2 S7 S15 # edited\n";
        let c = parse_changeset(text).unwrap();
        assert_eq!(
            c,
            ChangeSet::new(sids("S3 S4 S6 S8 S10 S13"), sids("S2 S7 S15")).unwrap()
        );
    }

    #[test]
    fn empty_lists() {
        assert_eq!(parse_changeset(b"deleted:\nmodified:\n").unwrap(), ChangeSet::default());
        assert_eq!(parse_changeset(b"").unwrap(), ChangeSet::default());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_changeset(b"deleted: S7\nmodified: S7 S2\n"),
            Err(Error::Overlap(v)) if v == vec!["S7"]
        ));
        assert!(matches!(
            parse_changeset(b"deleted: S1\nadded: S2\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_changeset(b"S1 S2\n"),
            Err(Error::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn duplicates_collapse_and_write_is_canonical() {
        let c = parse_changeset(b"modified: S2 S2 S1\n").unwrap();
        assert_eq!(c.modified().len(), 2);
        assert_eq!(write_changeset(&c), "deleted:\nmodified: S1 S2\n");
        assert_eq!(parse_changeset(write_changeset(&c).as_bytes()).unwrap(), c);
    }
}
