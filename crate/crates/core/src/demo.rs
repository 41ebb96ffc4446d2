//! Built-in worked example: a 15 × 15 suite, six deleted and three modified
//! statements. Every intermediate matrix and row-sum table is recomputed and
//! compared against embedded golden tables.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ingest::{parse_changeset, parse_matrix_csv};
use crate::matrix::{labels, CoverageMatrix, TestCaseId};
use crate::prioritization::prioritize;
use crate::selection::select_with_steps;

pub const TABLE1_CSV: &str = include_str!("../fixtures/table1.csv");
pub const CHANGES: &str = "deleted: S3 S4 S6 S8 S10 S13\nmodified: S2 S7 S15\n";

/// Row sums in row order.
pub type RowSums = Vec<(TestCaseId, usize)>;

/// Expected intermediate results of the worked example.
#[derive(Debug, Clone)]
pub struct Goldens {
    /// Deleted columns removed.
    pub table2: CoverageMatrix,
    pub table3: RowSums,
    /// Out-dated rows removed.
    pub table4: CoverageMatrix,
    /// Surplus rows removed; input to prioritization.
    pub table5: CoverageMatrix,
    pub table6: RowSums,
    /// Residual matrix after the first pick.
    pub table7: CoverageMatrix,
    pub table8: RowSums,
    /// Residual matrix after the second pick.
    pub table9: CoverageMatrix,
    pub table10: RowSums,
    pub out_dated: Vec<TestCaseId>,
    pub surplus: Vec<TestCaseId>,
    pub required: Vec<TestCaseId>,
    pub order: Vec<TestCaseId>,
}

fn sums(text: &str) -> RowSums {
    text.lines()
        .filter(|l| !l.is_empty())
        .map(|l| {
            let (t, n) = l.split_once(',').expect("fixture row");
            (TestCaseId::new(t).expect("fixture label"), n.parse().expect("fixture count"))
        })
        .collect()
}

fn tids(s: &str) -> Vec<TestCaseId> {
    labels::<TestCaseId>(s).expect("fixture labels")
}

impl Goldens {
    pub fn embedded() -> Self {
        let m = |s: &str| parse_matrix_csv(s.as_bytes()).expect("fixture matrix");
        Goldens {
            table2: m(include_str!("../fixtures/table2.csv")),
            table3: sums(include_str!("../fixtures/table3.txt")),
            table4: m(include_str!("../fixtures/table4.csv")),
            table5: m(include_str!("../fixtures/table5.csv")),
            table6: sums(include_str!("../fixtures/table6.txt")),
            table7: m(include_str!("../fixtures/table7.csv")),
            table8: sums(include_str!("../fixtures/table8.txt")),
            table9: m(include_str!("../fixtures/table9.csv")),
            table10: sums(include_str!("../fixtures/table10.txt")),
            out_dated: tids("T3 T11"),
            surplus: tids("T2 T7 T15"),
            required: tids("T1 T4 T5 T6 T8 T9 T10 T12 T13 T14"),
            order: tids("T10 T1 T6"),
        }
    }
}

fn mismatch(table: &str, detail: String) -> Error {
    Error::GoldenMismatch {
        table: table.to_string(),
        detail,
    }
}

fn compare_matrix(table: &str, got: &CoverageMatrix, want: &CoverageMatrix) -> Result<()> {
    if got.statements() != want.statements() {
        return Err(mismatch(
            table,
            format!("columns {:?}, expected {:?}", got.statements(), want.statements()),
        ));
    }
    if got.tests() != want.tests() {
        return Err(mismatch(
            table,
            format!("rows {:?}, expected {:?}", got.tests(), want.tests()),
        ));
    }
    for r in 0..got.n_tests() {
        for c in 0..got.n_statements() {
            let (g, w) = (got.is_covered(r, c), want.is_covered(r, c));
            if g != w {
                return Err(mismatch(
                    table,
                    format!(
                        "cell ({}, {}) is {}, expected {}",
                        got.tests()[r],
                        got.statements()[c],
                        g as u8,
                        w as u8
                    ),
                ));
            }
        }
    }
    Ok(())
}

fn compare_sums(table: &str, got: &[(TestCaseId, usize)], want: &[(TestCaseId, usize)]) -> Result<()> {
    if got.len() != want.len() {
        return Err(mismatch(table, format!("{} rows, expected {}", got.len(), want.len())));
    }
    for ((gt, gn), (wt, wn)) in got.iter().zip(want) {
        if gt != wt || gn != wn {
            return Err(mismatch(table, format!("row {gt} = {gn}, expected {wt} = {wn}")));
        }
    }
    Ok(())
}

fn compare_vector(name: &str, got: &[TestCaseId], want: &[TestCaseId]) -> Result<()> {
    if got != want {
        return Err(mismatch(name, format!("{got:?}, expected {want:?}")));
    }
    Ok(())
}

fn row_sums(m: &CoverageMatrix) -> RowSums {
    m.tests().iter().cloned().zip(m.row_counts()).collect()
}

fn print_matrix(out: &mut String, title: &str, m: &CoverageMatrix) {
    let _ = writeln!(out, "{title}");
    let _ = write!(out, "{:<5}", "");
    for s in m.statements() {
        let _ = write!(out, " {:>3}", s.as_str());
    }
    out.push('\n');
    for (r, t) in m.tests().iter().enumerate() {
        let _ = write!(out, "{:<5}", t.as_str());
        for c in 0..m.n_statements() {
            let _ = write!(out, " {:>3}", m.is_covered(r, c) as u8);
        }
        out.push('\n');
    }
    out.push('\n');
}

fn print_sums(out: &mut String, title: &str, sums: &[(TestCaseId, usize)]) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{:<5} Statements Covered", "Test");
    for (t, n) in sums {
        let _ = writeln!(out, "{:<5} {n}", t.as_str());
    }
    out.push('\n');
}

fn print_vector(out: &mut String, name: &str, v: &[TestCaseId]) {
    let names: Vec<&str> = v.iter().map(TestCaseId::as_str).collect();
    let _ = writeln!(out, "{name} = {{{}}}", names.join(", "));
}

/// Recompute the worked example, check it against `goldens`, and return the
/// printed tables. Stops at the first divergence.
pub fn run_demo(goldens: &Goldens) -> Result<String> {
    let input = parse_matrix_csv(TABLE1_CSV.as_bytes())?;
    let changes = parse_changeset(CHANGES.as_bytes())?;
    let mut out = String::new();

    print_matrix(&mut out, "Table 1. Test cases and statement coverage", &input);
    let _ = writeln!(out, "{}", CHANGES.trim_end());
    out.push('\n');

    let (partition, steps) = select_with_steps(&input, &changes)?;
    compare_matrix("Table 2", &steps.after_deletion, &goldens.table2)?;
    print_matrix(&mut out, "Table 2. Deleted statements removed", &steps.after_deletion);

    let t3: RowSums = steps
        .after_deletion
        .tests()
        .iter()
        .cloned()
        .zip(steps.row_counts.iter().copied())
        .collect();
    compare_sums("Table 3", &t3, &goldens.table3)?;
    print_sums(&mut out, "Table 3. Statements covered per test", &t3);

    compare_vector("out_dated", &partition.out_dated, &goldens.out_dated)?;
    compare_matrix("Table 4", &steps.without_out_dated, &goldens.table4)?;
    print_vector(&mut out, "out_dated", &partition.out_dated);
    out.push('\n');
    print_matrix(&mut out, "Table 4. Out-dated tests removed", &steps.without_out_dated);

    compare_vector("surplus", &partition.surplus, &goldens.surplus)?;
    compare_matrix("Table 5", &partition.reduced, &goldens.table5)?;
    compare_vector("required", &partition.required, &goldens.required)?;
    print_vector(&mut out, "surplus", &partition.surplus);
    out.push('\n');
    print_matrix(&mut out, "Table 5. Surplus tests removed", &partition.reduced);
    print_vector(&mut out, "required", &partition.required);
    out.push('\n');

    let suite = prioritize(&partition.reduced);
    if suite.trace.len() < 3 {
        return Err(mismatch(
            "prioritization",
            format!("{} greedy steps, expected 3", suite.trace.len()),
        ));
    }
    let sum_tables = [
        ("Table 6", &goldens.table6),
        ("Table 8", &goldens.table8),
        ("Table 10", &goldens.table10),
    ];
    let residual_tables = [("Table 7", &goldens.table7), ("Table 9", &goldens.table9)];
    let mut residual = partition.reduced.clone();
    for (i, (name, golden)) in sum_tables.into_iter().enumerate() {
        let _ = writeln!(out, "Iteration {}", i + 1);
        let sums = row_sums(&residual);
        compare_sums(name, &sums, golden)?;
        print_sums(&mut out, &format!("{name}. Statements covered per test"), &sums);

        let step = &suite.trace[i];
        let best = sums.iter().map(|s| s.1).max().unwrap_or(0);
        if step.residual != best {
            return Err(mismatch(
                name,
                format!("greedy step chose residual {}, table maximum is {best}", step.residual),
            ));
        }
        print_vector(&mut out, "tied", &step.tied);
        print_vector(&mut out, "TCP", &suite.order[..=i]);
        out.push('\n');

        residual = residual.remove_statements(&step.newly_covered)?;
        if let Some((name, golden)) = residual_tables.get(i) {
            compare_matrix(name, &residual, golden)?;
            print_matrix(&mut out, &format!("{name}. Updated matrix"), &residual);
        }
    }
    compare_vector("TCP", &suite.order, &goldens.order)?;
    if !suite.uncoverable.is_empty() {
        return Err(mismatch("TCP", format!("uncoverable {:?}", suite.uncoverable)));
    }
    print_vector(&mut out, "Final prioritized vector TCP", &suite.order);
    let _ = writeln!(
        out,
        "Suite size: {} -> {} after selection, {} -> {} after prioritization",
        input.n_tests(),
        partition.required.len(),
        partition.required.len(),
        suite.order.len()
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_goldens_pass() {
        let out = run_demo(&Goldens::embedded()).unwrap();
        assert!(out.contains("Final prioritized vector TCP = {T10, T1, T6}"));
        assert_eq!(out, run_demo(&Goldens::embedded()).unwrap());
    }

    #[test]
    fn tampered_cell_is_named() {
        let mut g = Goldens::embedded();
        let text = include_str!("../fixtures/table7.csv").replace("T6,0,1,1", "T6,0,0,1");
        g.table7 = parse_matrix_csv(text.as_bytes()).unwrap();
        match run_demo(&g) {
            Err(Error::GoldenMismatch { table, detail }) => {
                assert_eq!(table, "Table 7");
                assert!(detail.contains("(T6, S11)"), "{detail}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tampered_sum_is_named() {
        let mut g = Goldens::embedded();
        g.table8[0].1 = 3;
        assert!(matches!(run_demo(&g), Err(Error::GoldenMismatch { table, .. }) if table == "Table 8"));
    }
}
