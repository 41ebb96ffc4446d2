//! Coverage-based regression test selection and prioritization.
//!
//! Tests are partitioned into out-dated, surplus and required clusters from
//! a test × statement coverage matrix and a set of deleted and modified
//! statements ([`selection`]). The required tests are then ordered greedily
//! by additional statement coverage ([`prioritization`]).

pub mod demo;
pub mod error;
pub mod ingest;
pub mod matrix;
pub mod pipeline;
pub mod prioritization;
pub mod report;
pub mod selection;

pub use error::{Error, ErrorClass, Result};
pub use matrix::{validate, ChangeSet, CoverageMatrix, Finding, RawMatrix, StatementId, TestCaseId, ValidationReport};
pub use prioritization::{coverage_curve, prioritization_metrics, prioritize, CurvePoint, PrioritizedSuite, TraceStep};
pub use report::{emit_svg_bars, Chart, Clusters, SuiteReport};
pub use selection::{select, selection_metrics, SelectionPartition};
