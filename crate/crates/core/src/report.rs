//! Suite reports and their serializations (text, JSON, CSV, SVG).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Label, StatementId, TestCaseId};
use crate::prioritization::{CurvePoint, TraceStep};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clusters {
    pub out_dated: Vec<TestCaseId>,
    pub surplus: Vec<TestCaseId>,
    pub required: Vec<TestCaseId>,
}

/// Outcome of a selection and/or prioritization run.
///
/// Size fields are `None` when the stage that fills them did not run. For a
/// prioritization-only run `required_size` is the size of the input suite.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub original_size: Option<usize>,
    pub out_dated_size: Option<usize>,
    pub surplus_size: Option<usize>,
    pub required_size: Option<usize>,
    pub prioritized_size: Option<usize>,
    pub clusters: Option<Clusters>,
    /// Greedy order, followed by any appended zero-contribution tests.
    pub order: Vec<TestCaseId>,
    /// Tests appended after the greedy order; they add no coverage.
    pub zero_contribution: Vec<TestCaseId>,
    pub trace: Vec<TraceStep>,
    pub coverage_curve: Vec<CurvePoint>,
    pub uncoverable: Vec<StatementId>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Selection,
    Prioritization,
}

impl SuiteReport {
    /// Size bookkeeping and curve monotonicity.
    pub fn check(&self) -> Result<()> {
        if let (Some(o), Some(d), Some(s), Some(r)) = (
            self.original_size,
            self.out_dated_size,
            self.surplus_size,
            self.required_size,
        ) {
            if o != d + s + r {
                return Err(Error::Mismatch(format!(
                    "original size {o} != {d} out-dated + {s} surplus + {r} required"
                )));
            }
        }
        if let Some(p) = self.prioritized_size {
            if p != self.order.len() {
                return Err(Error::Mismatch(format!(
                    "prioritized size {p} but order has {} tests",
                    self.order.len()
                )));
            }
            if let Some(r) = self.required_size {
                if p > r {
                    return Err(Error::Mismatch(format!(
                        "prioritized {p} tests out of {r} required"
                    )));
                }
            }
        }
        if self
            .coverage_curve
            .windows(2)
            .any(|w| w[1].fraction < w[0].fraction)
        {
            return Err(Error::Mismatch("coverage curve decreases".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ReportDecode(e.to_string()))
    }

    /// Three-column `record,key,value` CSV; label lists are space separated.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut row = |a: &str, b: &str, c: &str| w.write_record([a, b, c]).expect("write to Vec");
        row("record", "key", "value");
        for (key, v) in [
            ("original", self.original_size),
            ("out_dated", self.out_dated_size),
            ("surplus", self.surplus_size),
            ("required", self.required_size),
            ("prioritized", self.prioritized_size),
        ] {
            if let Some(v) = v {
                row("size", key, &v.to_string());
            }
        }
        if let Some(c) = &self.clusters {
            row("cluster", "out_dated", &join(&c.out_dated));
            row("cluster", "surplus", &join(&c.surplus));
            row("cluster", "required", &join(&c.required));
        }
        row("order", "", &join(&self.order));
        row("zero_contribution", "", &join(&self.zero_contribution));
        for (i, step) in self.trace.iter().enumerate() {
            let n = i + 1;
            row("trace", &format!("{n}:chosen"), step.chosen.as_str());
            row("trace", &format!("{n}:residual"), &step.residual.to_string());
            row("trace", &format!("{n}:newly_covered"), &join(&step.newly_covered));
            row("trace", &format!("{n}:tied"), &join(&step.tied));
        }
        for p in &self.coverage_curve {
            row("curve", &p.k.to_string(), &p.fraction.to_string());
        }
        row("uncoverable", "", &join(&self.uncoverable));
        for warning in &self.warnings {
            row("warning", "", warning);
        }
        String::from_utf8(w.into_inner().expect("flush to Vec")).expect("utf-8 input")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: String| Error::ReportDecode(m);
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let mut out = SuiteReport::default();
        let mut clusters = Clusters {
            out_dated: Vec::new(),
            surplus: Vec::new(),
            required: Vec::new(),
        };
        let mut has_clusters = false;
        let mut pending: Option<(usize, TestCaseId, usize, Vec<StatementId>)> = None;

        for rec in r.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let (kind, key, value) = (&rec[0], &rec[1], &rec[2]);
            let num = |v: &str| v.parse::<usize>().map_err(|_| bad(format!("bad number {v:?}")));
            match kind {
                "size" => {
                    let slot = match key {
                        "original" => &mut out.original_size,
                        "out_dated" => &mut out.out_dated_size,
                        "surplus" => &mut out.surplus_size,
                        "required" => &mut out.required_size,
                        "prioritized" => &mut out.prioritized_size,
                        _ => return Err(bad(format!("unknown size {key:?}"))),
                    };
                    *slot = Some(num(value)?);
                }
                "cluster" => {
                    has_clusters = true;
                    let list = split::<TestCaseId>(value)?;
                    match key {
                        "out_dated" => clusters.out_dated = list,
                        "surplus" => clusters.surplus = list,
                        "required" => clusters.required = list,
                        _ => return Err(bad(format!("unknown cluster {key:?}"))),
                    }
                }
                "order" => out.order = split::<TestCaseId>(value)?,
                "zero_contribution" => out.zero_contribution = split::<TestCaseId>(value)?,
                "trace" => {
                    let (step, field) = key
                        .split_once(':')
                        .ok_or_else(|| bad(format!("bad trace key {key:?}")))?;
                    let step = num(step)?;
                    match (field, pending.take()) {
                        ("chosen", None) => {
                            pending = Some((step, TestCaseId::new(value)?, 0, Vec::new()))
                        }
                        ("residual", Some((s, t, _, n))) if s == step => {
                            pending = Some((s, t, num(value)?, n))
                        }
                        ("newly_covered", Some((s, t, c, _))) if s == step => {
                            pending = Some((s, t, c, split::<StatementId>(value)?))
                        }
                        ("tied", Some((s, chosen, residual, newly_covered))) if s == step => {
                            out.trace.push(TraceStep {
                                chosen,
                                residual,
                                newly_covered,
                                tied: split::<TestCaseId>(value)?,
                            })
                        }
                        _ => return Err(bad(format!("trace rows out of sequence at {key:?}"))),
                    }
                }
                "curve" => out.coverage_curve.push(CurvePoint {
                    k: num(key)?,
                    fraction: value
                        .parse()
                        .map_err(|_| bad(format!("bad fraction {value:?}")))?,
                }),
                "uncoverable" => out.uncoverable = split::<StatementId>(value)?,
                "warning" => out.warnings.push(value.to_string()),
                _ => return Err(bad(format!("unknown record {kind:?}"))),
            }
        }
        if pending.is_some() {
            return Err(bad("incomplete trace step".into()));
        }
        if has_clusters {
            out.clusters = Some(clusters);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(original) = self.original_size {
            let _ = writeln!(s, "Selection");
            let _ = writeln!(s, "  original suite  {original}");
            if let Some(c) = &self.clusters {
                for (name, list) in [
                    ("out-dated", &c.out_dated),
                    ("surplus", &c.surplus),
                    ("required", &c.required),
                ] {
                    let _ = writeln!(s, "  {name:<15} {:<4} {}", list.len(), brace(list));
                }
            }
            if let Some(r) = self.required_size {
                let _ = writeln!(s, "  reduction       {}", percent(original, r));
            }
        }
        if let Some(p) = self.prioritized_size {
            if !s.is_empty() {
                s.push('\n');
            }
            let _ = writeln!(s, "Prioritization");
            let _ = writeln!(s, "  order           {}", brace(&self.order));
            if !self.zero_contribution.is_empty() {
                let _ = writeln!(s, "  zero-contrib    {}", brace(&self.zero_contribution));
            }
            if let Some(r) = self.required_size {
                let _ = writeln!(s, "  size            {r} -> {p} ({} reduction)", percent(r, p));
            }
            if !self.trace.is_empty() {
                let _ = writeln!(s, "  step  test      residual  newly covered / tied");
                for (i, t) in self.trace.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "  {:<5} {:<9} {:<9} {} / {}",
                        i + 1,
                        t.chosen.as_str(),
                        t.residual,
                        brace(&t.newly_covered),
                        brace(&t.tied)
                    );
                }
            }
            let curve: Vec<String> = self
                .coverage_curve
                .iter()
                .map(|p| format!("{}:{:.1}%", p.k, p.fraction * 100.0))
                .collect();
            let _ = writeln!(s, "  coverage        {}", curve.join(" "));
            let _ = writeln!(s, "  uncoverable     {}", brace(&self.uncoverable));
        }
        s
    }

    /// Two-bar before/after chart as a standalone SVG 1.1 document.
    pub fn to_svg(&self, chart: Chart) -> Result<String> {
        let (title, before_label, after_label, before, after) = match chart {
            Chart::Selection => (
                "Test Suite Size after Selection",
                "Original",
                "Selected",
                self.original_size.ok_or(Error::MissingField("original_size"))?,
                self.required_size.ok_or(Error::MissingField("required_size"))?,
            ),
            Chart::Prioritization => (
                "Test Suite Size after Prioritization",
                "Selected",
                "Prioritized",
                self.required_size.ok_or(Error::MissingField("required_size"))?,
                self.prioritized_size
                    .ok_or(Error::MissingField("prioritized_size"))?,
            ),
        };
        Ok(svg_bars(title, [(before_label, before), (after_label, after)]))
    }
}

pub fn emit_svg_bars(report: &SuiteReport, chart: Chart) -> Result<String> {
    report.to_svg(chart)
}

const WIDTH: u32 = 360;
const HEIGHT: u32 = 260;
const PLOT_TOP: u32 = 50;
const PLOT_BOTTOM: u32 = 210;
const BAR_WIDTH: u32 = 80;

fn svg_bars(title: &str, bars: [(&str, usize); 2]) -> String {
    let max = bars.iter().map(|b| b.1).max().unwrap_or(0).max(1);
    let span = PLOT_BOTTOM - PLOT_TOP;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "  <title>{}</title>", escape(title));
    let _ = writeln!(s, r##"  <rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r#"  <text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2,
        escape(title)
    );
    let _ = writeln!(
        s,
        r##"  <line x1="40" y1="{PLOT_BOTTOM}" x2="{}" y2="{PLOT_BOTTOM}" stroke="#000000"/>"##,
        WIDTH - 40
    );
    for (i, (label, value)) in bars.iter().enumerate() {
        let x = 80 + i as u32 * 120;
        let h = (*value as u64 * span as u64 / max as u64) as u32;
        let y = PLOT_BOTTOM - h;
        let fill = if i == 0 { "#4e79a7" } else { "#f28e2b" };
        let mid = x + BAR_WIDTH / 2;
        let _ = writeln!(
            s,
            r#"  <rect x="{x}" y="{y}" width="{BAR_WIDTH}" height="{h}" fill="{fill}"/>"#
        );
        let _ = writeln!(
            s,
            r#"  <text x="{mid}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{value}</text>"#,
            y - 6
        );
        let _ = writeln!(
            s,
            r#"  <text x="{mid}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            PLOT_BOTTOM + 18,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn join<T: AsRef<str>>(v: &[T]) -> String {
    v.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(" ")
}

fn brace<T: AsRef<str>>(v: &[T]) -> String {
    format!(
        "{{{}}}",
        v.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(", ")
    )
}

fn percent(before: usize, after: usize) -> String {
    format!("{:.1}%", crate::selection::reduction(before, after) * 100.0)
}

fn split<T: Label>(text: &str) -> Result<Vec<T>> {
    text.split_whitespace().map(T::parse_label).collect()
}

impl AsRef<str> for TestCaseId {
    fn as_ref(&self) -> &str {
        self.as_str()
    }
}

impl AsRef<str> for StatementId {
    fn as_ref(&self) -> &str {
        self.as_str()
    }
}
