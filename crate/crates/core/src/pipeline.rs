//! Select → prioritize orchestration producing [`SuiteReport`]s.

use crate::error::Result;
use crate::matrix::{ChangeSet, CoverageMatrix};
use crate::prioritization::{coverage_curve, prioritization_metrics, prioritize, unchosen};
use crate::report::{Clusters, SuiteReport};
use crate::selection::{select, selection_metrics, SelectionPartition};

/// Selection stage only. The partition is returned alongside so callers can
/// keep the reduced matrix.
pub fn run_select(m: &CoverageMatrix, changes: &ChangeSet) -> Result<(SuiteReport, SelectionPartition)> {
    let partition = select(m, changes)?;
    let metrics = selection_metrics(&partition, m)?;
    let mut warnings = Vec::new();
    if !partition.uncovered_modified.is_empty() {
        let names: Vec<&str> = partition.uncovered_modified.iter().map(|s| s.as_str()).collect();
        warnings.push(format!(
            "modified statements covered by no required test: {}",
            names.join(" ")
        ));
    }
    let report = SuiteReport {
        original_size: Some(metrics.original_size),
        out_dated_size: Some(metrics.out_dated_size),
        surplus_size: Some(metrics.surplus_size),
        required_size: Some(metrics.required_size),
        clusters: Some(Clusters {
            out_dated: partition.out_dated.clone(),
            surplus: partition.surplus.clone(),
            required: partition.required.clone(),
        }),
        warnings,
        ..Default::default()
    };
    Ok((report, partition))
}

/// Prioritization stage only, over every test of `m`.
///
/// With `append_unchosen`, tests the greedy loop skipped follow the greedy
/// order in row order and are listed as zero-contribution.
pub fn run_prioritize(m: &CoverageMatrix, append_unchosen: bool) -> Result<SuiteReport> {
    let suite = prioritize(m);
    let curve = coverage_curve(&suite, m)?;
    let metrics = prioritization_metrics(&suite, m.n_tests())?;

    let mut warnings = metrics.warnings;
    if !suite.uncoverable.is_empty() {
        let names: Vec<&str> = suite.uncoverable.iter().map(|s| s.as_str()).collect();
        warnings.push(format!(
            "statements no test covers (left uncoverable): {}",
            names.join(" ")
        ));
    }
    let zero_contribution = if append_unchosen { unchosen(&suite, m) } else { Vec::new() };
    let mut order = suite.order;
    order.extend(zero_contribution.iter().cloned());

    Ok(SuiteReport {
        required_size: Some(m.n_tests()),
        prioritized_size: Some(order.len()),
        order,
        zero_contribution,
        trace: suite.trace,
        coverage_curve: curve,
        uncoverable: suite.uncoverable,
        warnings,
        ..Default::default()
    })
}

/// Full pipeline: select, then prioritize the reduced matrix.
pub fn run(m: &CoverageMatrix, changes: &ChangeSet, append_unchosen: bool) -> Result<SuiteReport> {
    let (mut report, partition) = run_select(m, changes)?;
    let prio = run_prioritize(&partition.reduced, append_unchosen)?;
    report.prioritized_size = prio.prioritized_size;
    report.order = prio.order;
    report.zero_contribution = prio.zero_contribution;
    report.trace = prio.trace;
    report.coverage_curve = prio.coverage_curve;
    report.uncoverable = prio.uncoverable;
    report.warnings.extend(prio.warnings);
    Ok(report)
}
