//! Cluster-partition test selection.
//!
//! Given a coverage matrix and the statements deleted and modified in the
//! new program version, every test lands in exactly one of three clusters:
//!
//! * **out-dated**: covers nothing once deleted statements are removed;
//! * **surplus**: covers surviving statements but none of the modified ones;
//! * **required**: covers at least one modified statement.
//!
//! When no statement is modified, the surplus filter is skipped and every
//! non-out-dated test is required.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ChangeSet, CoverageMatrix, StatementId, TestCaseId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionPartition {
    pub out_dated: Vec<TestCaseId>,
    pub surplus: Vec<TestCaseId>,
    pub required: Vec<TestCaseId>,
    /// Required rows over the original columns minus the deleted ones.
    pub reduced: CoverageMatrix,
    /// Modified statements that no required test covers.
    pub uncovered_modified: Vec<StatementId>,
}

/// Intermediate matrices of one selection run.
#[derive(Debug, Clone)]
pub struct SelectionSteps {
    pub after_deletion: CoverageMatrix,
    /// Row counts of `after_deletion`, in row order.
    pub row_counts: Vec<usize>,
    pub without_out_dated: CoverageMatrix,
}

pub fn select(m: &CoverageMatrix, changes: &ChangeSet) -> Result<SelectionPartition> {
    select_with_steps(m, changes).map(|(p, _)| p)
}

pub fn select_with_steps(
    m: &CoverageMatrix,
    changes: &ChangeSet,
) -> Result<(SelectionPartition, SelectionSteps)> {
    changes.check_against(m)?;

    let after_deletion = m.remove_statements(changes.deleted())?;
    let row_counts = after_deletion.row_counts();

    let out_rows: Vec<bool> = row_counts.iter().map(|&n| n == 0).collect();
    let without_out_dated = after_deletion.retain_rows(&out_rows);

    let mut is_modified = vec![false; after_deletion.n_statements()];
    for s in changes.modified() {
        // present: deleted and modified are disjoint
        is_modified[after_deletion.statement_position(s).expect("checked above")] = true;
    }
    let filter = !changes.modified().is_empty();

    let mut out_dated = Vec::new();
    let mut surplus = Vec::new();
    let mut required = Vec::new();
    let mut drop = out_rows;
    for (i, t) in after_deletion.tests().iter().enumerate() {
        if drop[i] {
            out_dated.push(t.clone());
        } else if filter && !after_deletion.row(i).iter().any(|&c| is_modified[c as usize]) {
            surplus.push(t.clone());
            drop[i] = true;
        } else {
            required.push(t.clone());
        }
    }
    let reduced = after_deletion.retain_rows(&drop);

    let mut hit = vec![false; reduced.n_statements()];
    for r in 0..reduced.n_tests() {
        for &c in reduced.row(r) {
            hit[c as usize] = true;
        }
    }
    let uncovered_modified = reduced
        .statements()
        .iter()
        .enumerate()
        .filter(|&(i, _)| is_modified[i] && !hit[i])
        .map(|(_, s)| s.clone())
        .collect();

    Ok((
        SelectionPartition {
            out_dated,
            surplus,
            required,
            reduced,
            uncovered_modified,
        },
        SelectionSteps {
            after_deletion,
            row_counts,
            without_out_dated,
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionMetrics {
    pub original_size: usize,
    pub out_dated_size: usize,
    pub surplus_size: usize,
    pub required_size: usize,
    /// `1 - required / original`; zero for an empty suite.
    pub reduction: f64,
}

pub fn selection_metrics(p: &SelectionPartition, original: &CoverageMatrix) -> Result<SelectionMetrics> {
    let mut seen = vec![false; original.n_tests()];
    for t in p.out_dated.iter().chain(&p.surplus).chain(&p.required) {
        let pos = original.test_position(t).ok_or_else(|| {
            Error::Mismatch(format!("partition names {t}, which is not in the matrix"))
        })?;
        if std::mem::replace(&mut seen[pos], true) {
            return Err(Error::Mismatch(format!("{t} appears in more than one cluster")));
        }
    }
    if let Some(pos) = seen.iter().position(|s| !s) {
        return Err(Error::Mismatch(format!(
            "{} is in no cluster",
            original.tests()[pos]
        )));
    }
    let original_size = original.n_tests();
    Ok(SelectionMetrics {
        original_size,
        out_dated_size: p.out_dated.len(),
        surplus_size: p.surplus.len(),
        required_size: p.required.len(),
        reduction: reduction(original_size, p.required.len()),
    })
}

pub(crate) fn reduction(before: usize, after: usize) -> f64 {
    if before == 0 {
        0.0
    } else {
        1.0 - after as f64 / before as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::labels;

    fn sids(s: &str) -> Vec<StatementId> {
        labels::<StatementId>(s).unwrap()
    }

    fn tids(s: &str) -> Vec<TestCaseId> {
        labels::<TestCaseId>(s).unwrap()
    }

    fn m(rows: &[&str]) -> CoverageMatrix {
        let width = rows.first().map_or(0, |r| r.len());
        let tests = (1..=rows.len()).map(|i| TestCaseId::new(format!("T{i}")).unwrap()).collect();
        let stmts = (1..=width).map(|i| StatementId::new(format!("S{i}")).unwrap()).collect();
        let cells: Vec<Vec<bool>> = rows.iter().map(|r| r.chars().map(|c| c == '1').collect()).collect();
        CoverageMatrix::from_dense(tests, stmts, &cells).unwrap()
    }

    #[test]
    fn deleted_only_test_is_out_dated_not_surplus() {
        // T1 covers only S1, which is deleted; it must not fall through to surplus.
        let mx = m(&["100", "011", "001"]);
        let c = ChangeSet::new(sids("S1"), sids("S2")).unwrap();
        let p = select(&mx, &c).unwrap();
        assert_eq!(p.out_dated, tids("T1"));
        assert_eq!(p.surplus, tids("T3"));
        assert_eq!(p.required, tids("T2"));
        assert_eq!(p.reduced.tests(), &tids("T2")[..]);
        assert_eq!(p.reduced.statements(), &sids("S2 S3")[..]);
    }

    #[test]
    fn empty_change_set_keeps_everything_nonzero() {
        let mx = m(&["10", "00", "01"]);
        let p = select(&mx, &ChangeSet::default()).unwrap();
        assert_eq!(p.out_dated, tids("T2"));
        assert!(p.surplus.is_empty());
        assert_eq!(p.required, tids("T1 T3"));
    }

    #[test]
    fn unknown_and_overlap_errors() {
        let mx = m(&["10"]);
        let c = ChangeSet::new(sids("S9"), sids("S1")).unwrap();
        assert!(matches!(select(&mx, &c), Err(Error::UnknownStatements(v)) if v == vec!["S9"]));
        assert!(ChangeSet::new(sids("S1"), sids("S1")).is_err());
    }

    #[test]
    fn uncovered_modified_is_reported() {
        let mx = m(&["110", "100"]);
        let c = ChangeSet::new(vec![], sids("S2 S3")).unwrap();
        let p = select(&mx, &c).unwrap();
        assert_eq!(p.required, tids("T1"));
        assert_eq!(p.uncovered_modified, sids("S3"));
    }

    #[test]
    fn metrics() {
        let mx = m(&["10", "01"]);
        let all = ChangeSet::new(sids("S1 S2"), vec![]).unwrap();
        let p = select(&mx, &all).unwrap();
        let r = selection_metrics(&p, &mx).unwrap();
        assert_eq!((r.original_size, r.required_size), (2, 0));
        assert_eq!(r.reduction, 1.0);

        let p = select(&mx, &ChangeSet::default()).unwrap();
        assert_eq!(selection_metrics(&p, &mx).unwrap().reduction, 0.0);

        let mut bad = p.clone();
        bad.required.pop();
        assert!(matches!(selection_metrics(&bad, &mx), Err(Error::Mismatch(_))));
        let mut bad = p;
        bad.surplus.push(bad.required[0].clone());
        assert!(matches!(selection_metrics(&bad, &mx), Err(Error::Mismatch(_))));
    }
}
