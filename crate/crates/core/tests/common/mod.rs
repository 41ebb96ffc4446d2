#![allow(dead_code)]

use proptest::prelude::*;
use regsel::ingest::parse_matrix_csv;
use regsel::{ChangeSet, CoverageMatrix, StatementId, TestCaseId};

pub const TABLE1: &str = include_str!("../../fixtures/table1.csv");
pub const TABLE2: &str = include_str!("../../fixtures/table2.csv");
pub const TABLE4: &str = include_str!("../../fixtures/table4.csv");
pub const TABLE5: &str = include_str!("../../fixtures/table5.csv");
pub const PAPER_CHANGES: &str = "deleted: S3 S4 S6 S8 S10 S13\nmodified: S2 S7 S15\n";

pub fn csv(text: &str) -> CoverageMatrix {
    parse_matrix_csv(text.as_bytes()).unwrap()
}

pub fn tids(s: &str) -> Vec<TestCaseId> {
    s.split_whitespace().map(|t| TestCaseId::new(t).unwrap()).collect()
}

pub fn sids(s: &str) -> Vec<StatementId> {
    s.split_whitespace().map(|t| StatementId::new(t).unwrap()).collect()
}

pub fn names<T: AsRef<str>>(v: &[T]) -> Vec<&str> {
    v.iter().map(AsRef::as_ref).collect()
}

pub fn dense(cells: &[Vec<bool>], width: usize) -> CoverageMatrix {
    let tests = (0..cells.len()).map(|i| TestCaseId::new(format!("T{}", i + 1)).unwrap()).collect();
    let stmts = (0..width).map(|j| StatementId::new(format!("S{}", j + 1)).unwrap()).collect();
    CoverageMatrix::from_dense(tests, stmts, cells).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cluster {
    OutDated,
    Surplus,
    Required,
}

/// Classify each test straight from the cluster definitions, without any
/// matrix operations.
pub fn select_oracle(cells: &[Vec<bool>], deleted: &[bool], modified: &[bool]) -> Vec<Cluster> {
    let any_modified = modified.iter().any(|&m| m);
    cells
        .iter()
        .map(|row| {
            let surviving = row.iter().zip(deleted).any(|(&c, &d)| c && !d);
            let touches_modified = row.iter().zip(modified).any(|(&c, &m)| c && m);
            if !surviving {
                Cluster::OutDated
            } else if any_modified && !touches_modified {
                Cluster::Surplus
            } else {
                Cluster::Required
            }
        })
        .collect()
}

pub struct GreedyOracle {
    pub order: Vec<usize>,
    pub counts: Vec<usize>,
    pub uncoverable: Vec<usize>,
}

/// Step-by-step greedy: rescan every remaining row against every remaining
/// column each round; first maximal row wins.
pub fn greedy_oracle(cells: &[Vec<bool>], width: usize) -> GreedyOracle {
    let mut column_alive = vec![true; width];
    let mut row_alive = vec![true; cells.len()];
    let mut order = Vec::new();
    let mut counts = Vec::new();
    loop {
        if !column_alive.iter().any(|&a| a) {
            break;
        }
        let mut best_row = None;
        let mut best_count = 0;
        for (r, row) in cells.iter().enumerate() {
            if !row_alive[r] {
                continue;
            }
            let mut count = 0;
            for c in 0..width {
                if column_alive[c] && row[c] {
                    count += 1;
                }
            }
            if count > best_count {
                best_count = count;
                best_row = Some(r);
            }
        }
        let Some(r) = best_row else { break };
        for c in 0..width {
            if cells[r][c] {
                column_alive[c] = false;
            }
        }
        row_alive[r] = false;
        order.push(r);
        counts.push(best_count);
    }
    GreedyOracle {
        order,
        counts,
        uncoverable: (0..width).filter(|&c| column_alive[c]).collect(),
    }
}

/// Random matrix up to `max` × `max` with a per-column change tag:
/// 0 untouched, 1 deleted, 2 modified.
pub fn matrix_and_changes(max: usize) -> impl Strategy<Value = (Vec<Vec<bool>>, usize, Vec<u8>)> {
    (0..=max, 0..=max).prop_flat_map(|(rows, width)| {
        (
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), width), rows),
            Just(width),
            proptest::collection::vec(0u8..3, width),
        )
    })
}

pub fn change_set(tags: &[u8]) -> (ChangeSet, Vec<bool>, Vec<bool>) {
    let deleted: Vec<bool> = tags.iter().map(|&t| t == 1).collect();
    let modified: Vec<bool> = tags.iter().map(|&t| t == 2).collect();
    let pick = |flags: &[bool]| -> Vec<StatementId> {
        flags
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(j, _)| StatementId::new(format!("S{}", j + 1)).unwrap())
            .collect()
    };
    let c = ChangeSet::new(pick(&deleted), pick(&modified)).unwrap();
    (c, deleted, modified)
}
