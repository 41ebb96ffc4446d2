//! Greedy additional-coverage prioritization.
//!
//! Repeatedly pick the test covering the most not-yet-covered statements,
//! breaking ties by the earliest row, until no remaining test adds anything.
//! Columns that no test covers are reported as uncoverable instead of
//! stalling the loop.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CoverageMatrix, StatementId, TestCaseId};
use crate::selection::reduction;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub chosen: TestCaseId,
    /// Statements the chosen test newly covered; its residual count.
    pub residual: usize,
    pub newly_covered: Vec<StatementId>,
    /// Every remaining test whose residual equalled the maximum, in row order.
    pub tied: Vec<TestCaseId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrioritizedSuite {
    pub order: Vec<TestCaseId>,
    pub trace: Vec<TraceStep>,
    pub uncoverable: Vec<StatementId>,
}

pub fn prioritize(m: &CoverageMatrix) -> PrioritizedSuite {
    let col_rows = m.column_rows();
    let mut residual = m.row_counts();
    let mut chosen = vec![false; m.n_tests()];
    let mut covered = vec![false; m.n_statements()];
    let mut order = Vec::new();
    let mut trace = Vec::new();

    loop {
        let mut best: Option<(usize, usize)> = None;
        for (r, &n) in residual.iter().enumerate() {
            if !chosen[r] && n > best.map_or(0, |(_, b)| b) {
                best = Some((r, n));
            }
        }
        let Some((pick, count)) = best else { break };

        let tied = (0..m.n_tests())
            .filter(|&r| !chosen[r] && residual[r] == count)
            .map(|r| m.tests()[r].clone())
            .collect();

        let mut newly_covered = Vec::with_capacity(count);
        for &c in m.row(pick) {
            let c = c as usize;
            if covered[c] {
                continue;
            }
            covered[c] = true;
            newly_covered.push(m.statements()[c].clone());
            for &r in &col_rows[c] {
                residual[r as usize] -= 1;
            }
        }
        chosen[pick] = true;

        let test = m.tests()[pick].clone();
        order.push(test.clone());
        trace.push(TraceStep {
            chosen: test,
            residual: count,
            newly_covered,
            tied,
        });
    }

    let uncoverable = covered
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| m.statements()[i].clone())
        .collect();

    PrioritizedSuite {
        order,
        trace,
        uncoverable,
    }
}

/// Tests of `m` that the greedy order left out, in row order.
pub fn unchosen(p: &PrioritizedSuite, m: &CoverageMatrix) -> Vec<TestCaseId> {
    let picked: std::collections::HashSet<&TestCaseId> = p.order.iter().collect();
    m.tests()
        .iter()
        .filter(|t| !picked.contains(t))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub k: usize,
    pub fraction: f64,
}

/// Fraction of `m`'s statements covered by each prefix of the order,
/// recomputed from the matrix rows.
pub fn coverage_curve(p: &PrioritizedSuite, m: &CoverageMatrix) -> Result<Vec<CurvePoint>> {
    let total = m.n_statements();
    for s in &p.uncoverable {
        if m.statement_position(s).is_none() {
            return Err(Error::Mismatch(format!("uncoverable statement {s} is not in the matrix")));
        }
    }
    let fraction = |n: usize| if total == 0 { 1.0 } else { n as f64 / total as f64 };

    let mut covered = vec![false; total];
    let mut n = 0;
    let mut curve = vec![CurvePoint { k: 0, fraction: 0.0 }];
    for (k, t) in p.order.iter().enumerate() {
        let row = m
            .test_position(t)
            .ok_or_else(|| Error::Mismatch(format!("ordered test {t} is not in the matrix")))?;
        let mut newly = Vec::new();
        for &c in m.row(row) {
            if !std::mem::replace(&mut covered[c as usize], true) {
                newly.push(&m.statements()[c as usize]);
            }
        }
        n += newly.len();
        if let Some(step) = p.trace.get(k) {
            if step.chosen != *t || !step.newly_covered.iter().eq(newly.iter().copied()) {
                return Err(Error::Mismatch(format!(
                    "step {} of the trace does not match the matrix",
                    k + 1
                )));
            }
        }
        curve.push(CurvePoint {
            k: k + 1,
            fraction: fraction(n),
        });
    }
    if !p.order.is_empty() && n + p.uncoverable.len() != total {
        return Err(Error::Mismatch(format!(
            "order covers {n} and {} are uncoverable, but the matrix has {total} statements",
            p.uncoverable.len()
        )));
    }
    Ok(curve)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrioritizationMetrics {
    pub selected_size: usize,
    pub prioritized_size: usize,
    pub reduction: f64,
    pub warnings: Vec<String>,
}

pub fn prioritization_metrics(p: &PrioritizedSuite, selected_size: usize) -> Result<PrioritizationMetrics> {
    if p.order.len() > selected_size {
        return Err(Error::Mismatch(format!(
            "prioritized {} tests out of only {selected_size} selected",
            p.order.len()
        )));
    }
    let mut warnings = Vec::new();
    if p.order.is_empty() && selected_size > 0 {
        warnings.push("nothing coverable: no selected test covers any statement".to_string());
    }
    Ok(PrioritizationMetrics {
        selected_size,
        prioritized_size: p.order.len(),
        reduction: reduction(selected_size, p.order.len()),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> CoverageMatrix {
        let width = rows.first().map_or(0, |r| r.len());
        let tests = (1..=rows.len()).map(|i| TestCaseId::new(format!("T{i}")).unwrap()).collect();
        let stmts = (1..=width).map(|i| StatementId::new(format!("S{i}")).unwrap()).collect();
        let cells: Vec<Vec<bool>> = rows.iter().map(|r| r.chars().map(|c| c == '1').collect()).collect();
        CoverageMatrix::from_dense(tests, stmts, &cells).unwrap()
    }

    fn names(v: &[TestCaseId]) -> Vec<&str> {
        v.iter().map(TestCaseId::as_str).collect()
    }

    #[test]
    fn ties_go_to_earliest_row() {
        let p = prioritize(&m(&["1100", "0011", "1010"]));
        assert_eq!(names(&p.order), ["T1", "T2"]);
        assert_eq!(names(&p.trace[0].tied), ["T1", "T2", "T3"]);
        assert_eq!(p.trace[1].residual, 2);
        assert!(p.uncoverable.is_empty());
    }

    #[test]
    fn all_zero_column_terminates() {
        let p = prioritize(&m(&["100", "100"]));
        assert_eq!(names(&p.order), ["T1"]);
        assert_eq!(p.uncoverable.len(), 2);
        let p = prioritize(&m(&["000", "000"]));
        assert!(p.order.is_empty());
        assert_eq!(p.uncoverable.len(), 3);
    }

    #[test]
    fn empty_inputs() {
        let p = prioritize(&CoverageMatrix::empty());
        assert!(p.order.is_empty() && p.uncoverable.is_empty());
        let zero_cols = m(&["", ""]);
        let p = prioritize(&zero_cols);
        assert!(p.order.is_empty() && p.uncoverable.is_empty());
        assert_eq!(coverage_curve(&p, &zero_cols).unwrap(), vec![CurvePoint { k: 0, fraction: 0.0 }]);
    }

    #[test]
    fn curve_single_full_test() {
        let mx = m(&["111", "100"]);
        let p = prioritize(&mx);
        let c = coverage_curve(&p, &mx).unwrap();
        assert_eq!(c, vec![CurvePoint { k: 0, fraction: 0.0 }, CurvePoint { k: 1, fraction: 1.0 }]);
        assert_eq!(names(&unchosen(&p, &mx)), ["T2"]);
    }

    #[test]
    fn curve_rejects_foreign_suite() {
        let p = prioritize(&m(&["11"]));
        assert!(coverage_curve(&p, &m(&["111"])).is_err());
    }

    #[test]
    fn metrics() {
        let p = prioritize(&m(&["11", "11"]));
        let r = prioritization_metrics(&p, 2).unwrap();
        assert_eq!((r.prioritized_size, r.reduction), (1, 0.5));
        assert!(prioritization_metrics(&p, 0).is_err());

        let p = prioritize(&m(&["00"]));
        let r = prioritization_metrics(&p, 1).unwrap();
        assert_eq!(r.reduction, 1.0);
        assert_eq!(r.warnings.len(), 1);

        let p = prioritize(&m(&["10", "01"]));
        assert_eq!(prioritization_metrics(&p, 2).unwrap().reduction, 0.0);
    }
}
