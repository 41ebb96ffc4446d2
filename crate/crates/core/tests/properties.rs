mod common;

use std::collections::HashSet;

use common::*;
use proptest::prelude::*;
use regsel::ingest::{derive_changeset_from_diff, import_lcov, parse_changeset, parse_matrix_csv, write_changeset, write_matrix_csv, LineMap};
use regsel::pipeline;
use regsel::prioritization::{coverage_curve, prioritize};
use regsel::selection::select;
use regsel::{ChangeSet, StatementId, SuiteReport, TestCaseId};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn remove_statements_composes((cells, width, tags) in matrix_and_changes(10)) {
        let m = dense(&cells, width);
        let a: Vec<StatementId> = tags.iter().enumerate().filter(|(_, &t)| t == 1).map(|(j, _)| m.statements()[j].clone()).collect();
        let b: Vec<StatementId> = tags.iter().enumerate().filter(|(_, &t)| t == 2).map(|(j, _)| m.statements()[j].clone()).collect();
        let stepwise = m.remove_statements(&a).unwrap().remove_statements(&b).unwrap();
        let at_once = m.remove_statements(a.iter().chain(&b)).unwrap();
        prop_assert_eq!(&stepwise, &at_once);

        let rows: Vec<TestCaseId> = m.tests().iter().step_by(2).cloned().collect();
        let x = m.remove_tests(&rows).unwrap().remove_statements(&a).unwrap();
        let y = m.remove_statements(&a).unwrap().remove_tests(&rows).unwrap();
        prop_assert_eq!(&x, &y);

        // surviving labels keep their relative order
        let positions: Vec<usize> = at_once.statements().iter().map(|s| m.statement_position(s).unwrap()).collect();
        prop_assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn row_count_matches_covered_set((cells, width, _) in matrix_and_changes(10)) {
        let m = dense(&cells, width);
        for t in m.tests() {
            prop_assert_eq!(m.row_coverage_count(t).unwrap(), m.covered_statements(t).unwrap().len());
        }
    }

    #[test]
    fn selection_invariants((cells, width, tags) in matrix_and_changes(10)) {
        let m = dense(&cells, width);
        let (c, _, _) = change_set(&tags);
        let p = select(&m, &c).unwrap();
        prop_assert_eq!(&p, &select(&m, &c).unwrap());

        let all: Vec<&TestCaseId> = p.out_dated.iter().chain(&p.surplus).chain(&p.required).collect();
        let unique: HashSet<_> = all.iter().collect();
        prop_assert_eq!(all.len(), m.n_tests());
        prop_assert_eq!(unique.len(), m.n_tests());
        prop_assert_eq!(p.reduced.tests(), &p.required[..]);
        if c.modified().is_empty() {
            prop_assert!(p.surplus.is_empty());
        }

        // enlarging the deleted set never shrinks out_dated
        let extra: Vec<StatementId> = (0..width)
            .filter(|&j| tags[j] == 0)
            .map(|j| m.statements()[j].clone())
            .chain(c.deleted().iter().cloned())
            .collect();
        let bigger = ChangeSet::new(extra, c.modified().iter().cloned()).unwrap();
        let q = select(&m, &bigger).unwrap();
        let before: HashSet<_> = p.out_dated.iter().collect();
        let after: HashSet<_> = q.out_dated.iter().collect();
        prop_assert!(before.is_subset(&after));
    }

    #[test]
    fn prioritization_invariants((cells, width, _) in matrix_and_changes(12)) {
        let m = dense(&cells, width);
        let p = prioritize(&m);
        prop_assert_eq!(&p, &prioritize(&m));
        prop_assert!(p.order.len() <= m.n_tests().min(m.n_statements()));
        let unique: HashSet<_> = p.order.iter().collect();
        prop_assert_eq!(unique.len(), p.order.len());

        let mut covered: HashSet<StatementId> = p.uncoverable.iter().cloned().collect();
        for step in &p.trace {
            prop_assert!(step.residual > 0);
            prop_assert_eq!(step.residual, step.newly_covered.len());
            prop_assert_eq!(step.tied.first(), Some(&step.chosen));
            for s in &step.newly_covered {
                prop_assert!(covered.insert(s.clone()));
            }
        }
        prop_assert_eq!(covered.len(), m.n_statements());

        let curve = coverage_curve(&p, &m).unwrap();
        prop_assert!(curve.windows(2).all(|w| w[0].fraction <= w[1].fraction));
    }

    #[test]
    fn csv_round_trip((cells, width, _) in matrix_and_changes(12)) {
        let m = dense(&cells, width);
        let bytes = write_matrix_csv(&m);
        let back = parse_matrix_csv(&bytes).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(write_matrix_csv(&back), bytes);
    }

    #[test]
    fn changeset_text_is_order_and_space_insensitive(tags in proptest::collection::vec(0u8..3, 0..15), seed in any::<u64>()) {
        let (c, _, _) = change_set(&tags);
        let mut del: Vec<&str> = c.deleted().iter().map(StatementId::as_str).collect();
        let mut modi: Vec<&str> = c.modified().iter().map(StatementId::as_str).collect();
        if seed % 2 == 0 { del.reverse(); }
        if seed % 3 == 0 { modi.reverse(); }
        let sep = if seed % 5 == 0 { " ,\t " } else { "  " };
        let text = format!("  modified:{sep}{}\n# note\n\ndeleted: {}\n", modi.join(sep), del.join(sep));
        let parsed = parse_changeset(text.as_bytes()).unwrap();
        prop_assert_eq!(&parsed, &c);
        prop_assert_eq!(write_changeset(&parsed), write_changeset(&c));
    }

    #[test]
    fn diff_never_labels_both(ops in proptest::collection::vec(0u8..4, 1..30)) {
        // 0 context, 1 removal, 2 addition, 3 removal of a line sharing the previous label
        let mut body = String::new();
        let (mut old_len, mut new_len) = (0, 0);
        let mut map = LineMap::new();
        for op in &ops {
            match op {
                0 => { body.push_str(" c\n"); old_len += 1; new_len += 1; }
                2 => { body.push_str("+a\n"); new_len += 1; }
                _ => { body.push_str("-r\n"); old_len += 1; }
            }
            if *op != 2 {
                let label = if *op == 3 && old_len > 1 { old_len - 1 } else { old_len };
                map.insert(None, old_len, StatementId::new(format!("S{label}")).unwrap());
            }
        }
        let diff = format!("--- a/f\n+++ b/f\n@@ -1,{old_len} +1,{new_len} @@\n{body}");
        let d = derive_changeset_from_diff(&diff, &map).unwrap();
        prop_assert!(d.changes.deleted().is_disjoint(d.changes.modified()));
    }

    #[test]
    fn lcov_content_is_order_independent((cells, width, _) in matrix_and_changes(8), rotate in 0usize..8) {
        let m = dense(&cells, width);
        let records: Vec<(TestCaseId, String)> = m.tests().iter().enumerate().map(|(r, t)| {
            let mut text = String::from("SF:f\n");
            for (c, hit) in m.dense_row(r).into_iter().enumerate() {
                if hit || c % 2 == 0 {
                    text.push_str(&format!("DA:{},{}\n", c + 1, hit as u8));
                }
            }
            (t.clone(), text)
        }).collect();
        let mut shuffled = records.clone();
        if !shuffled.is_empty() {
            let k = rotate % shuffled.len();
            shuffled.rotate_left(k);
        }
        let a = import_lcov(&records).unwrap().matrix;
        let b = import_lcov(&shuffled).unwrap().matrix;
        for (ri, t) in a.tests().iter().enumerate() {
            let rj = b.test_position(t).unwrap();
            for (ci, s) in a.statements().iter().enumerate() {
                let cj = b.statement_position(s).unwrap();
                prop_assert_eq!(a.is_covered(ri, ci), b.is_covered(rj, cj));
            }
        }
        prop_assert_eq!(a.n_statements(), b.n_statements());
    }

    #[test]
    fn report_serializations_round_trip((cells, width, tags) in matrix_and_changes(10), append in any::<bool>()) {
        let m = dense(&cells, width);
        let (c, _, _) = change_set(&tags);
        let r = pipeline::run(&m, &c, append).unwrap();
        r.check().unwrap();
        prop_assert_eq!(&SuiteReport::from_json(&r.to_json()).unwrap(), &r);
        prop_assert_eq!(&SuiteReport::from_csv(&r.to_csv()).unwrap(), &r);
    }

    #[test]
    fn run_is_select_then_prioritize((cells, width, tags) in matrix_and_changes(10)) {
        let m = dense(&cells, width);
        let (c, _, _) = change_set(&tags);
        let full = pipeline::run(&m, &c, false).unwrap();
        let (_, partition) = pipeline::run_select(&m, &c).unwrap();
        let reparsed = parse_matrix_csv(&write_matrix_csv(&partition.reduced)).unwrap();
        let prio = pipeline::run_prioritize(&reparsed, false).unwrap();
        prop_assert_eq!(&full.order, &prio.order);
        prop_assert_eq!(&full.trace, &prio.trace);
        prop_assert_eq!(&full.coverage_curve, &prio.coverage_curve);
        prop_assert_eq!(&full.uncoverable, &prio.uncoverable);
        prop_assert_eq!(full.prioritized_size, prio.prioritized_size);
        prop_assert_eq!(full.required_size, prio.required_size);
    }
}
