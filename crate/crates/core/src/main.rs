use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use regsel::demo::{run_demo, Goldens};
use regsel::ingest::{derive_changeset_from_diff, import_lcov, parse_changeset, parse_matrix_csv, write_matrix_csv, LineMap};
use regsel::{pipeline, ChangeSet, Chart, CoverageMatrix, Error, ErrorClass, SuiteReport, TestCaseId};

#[derive(Parser)]
#[command(name = "regsel", version, about = "Select and prioritize regression tests from statement coverage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition the suite into out-dated, surplus and required tests.
    Select {
        #[command(flatten)]
        input: MatrixInput,
        #[command(flatten)]
        changes: ChangeInput,
        #[command(flatten)]
        output: Output,
        /// Also write the required-test matrix as CSV.
        #[arg(long, value_name = "PATH")]
        reduced: Option<PathBuf>,
    },
    /// Order tests by greedy additional statement coverage.
    Prioritize {
        #[command(flatten)]
        input: MatrixInput,
        #[command(flatten)]
        output: Output,
        /// Append tests the greedy order skipped, in matrix row order.
        #[arg(long)]
        append_unchosen: bool,
    },
    /// Select, then prioritize the required tests.
    Run {
        #[command(flatten)]
        input: MatrixInput,
        #[command(flatten)]
        changes: ChangeInput,
        #[command(flatten)]
        output: Output,
        /// Append tests the greedy order skipped, in matrix row order.
        #[arg(long)]
        append_unchosen: bool,
    },
    /// Reproduce the built-in 15 × 15 worked example and check every table.
    Demo,
}

#[derive(Args)]
struct MatrixInput {
    /// Coverage matrix CSV.
    #[arg(long, value_name = "PATH", required_unless_present = "lcov", conflicts_with = "lcov")]
    matrix: Option<PathBuf>,
    /// Per-test LCOV tracefile as TEST=PATH; repeat for each test.
    #[arg(long, value_name = "TEST=PATH")]
    lcov: Vec<String>,
}

#[derive(Args)]
struct ChangeInput {
    /// Change spec listing deleted and modified statements.
    #[arg(long, value_name = "PATH", required_unless_present = "diff", conflicts_with = "diff")]
    changes: Option<PathBuf>,
    /// Unified diff of the old program against the new one.
    #[arg(long, value_name = "PATH", requires = "line_map")]
    diff: Option<PathBuf>,
    /// Statement label to old-file line table used with --diff.
    #[arg(long, value_name = "PATH", requires = "diff")]
    line_map: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Which bar chart to draw with --format svg.
    #[arg(long, value_enum)]
    chart: Option<ChartKind>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartKind {
    Selection,
    Prioritization,
}

enum Failure {
    Io(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

fn load_matrix(input: &MatrixInput) -> CliResult<CoverageMatrix> {
    let m = match &input.matrix {
        Some(path) => parse_matrix_csv(&read(path)?)?,
        None => {
            let mut records = Vec::new();
            for spec in &input.lcov {
                let (test, path) = spec
                    .split_once('=')
                    .ok_or_else(|| Failure::Io(format!("--lcov expects TEST=PATH, got {spec:?}")))?;
                let text = String::from_utf8(read(Path::new(path))?).map_err(|_| Error::MalformedLcov {
                    test: test.to_string(),
                    line: 0,
                    message: "not valid UTF-8".into(),
                })?;
                records.push((TestCaseId::new(test)?, text));
            }
            let imported = import_lcov(&records)?;
            for n in &imported.notices {
                warn(n);
            }
            imported.matrix
        }
    };
    for f in m.findings() {
        warn(&f.to_string());
    }
    Ok(m)
}

fn load_changes(input: &ChangeInput) -> CliResult<ChangeSet> {
    if let Some(path) = &input.changes {
        return Ok(parse_changeset(&read(path)?)?);
    }
    let (Some(diff), Some(map)) = (&input.diff, &input.line_map) else {
        return Err(Failure::Io("either --changes or --diff with --line-map is required".into()));
    };
    let text = String::from_utf8(read(diff)?).map_err(|_| Error::MalformedDiff {
        line: 0,
        message: "not valid UTF-8".into(),
    })?;
    let map = LineMap::parse(&read(map)?)?;
    let derived = derive_changeset_from_diff(&text, &map)?;
    for w in &derived.warnings {
        warn(w);
    }
    Ok(derived.changes)
}

fn emit(report: &SuiteReport, output: &Output, default_chart: Chart) -> CliResult<()> {
    for w in &report.warnings {
        warn(w);
    }
    let body = match output.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Svg => {
            let chart = match output.chart {
                Some(ChartKind::Selection) => Chart::Selection,
                Some(ChartKind::Prioritization) => Chart::Prioritization,
                None => default_chart,
            };
            report.to_svg(chart)?
        }
    };
    write_out(output.out.as_deref(), body.as_bytes())
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Select {
            input,
            changes,
            output,
            reduced,
        } => {
            let m = load_matrix(&input)?;
            let c = load_changes(&changes)?;
            let (report, partition) = pipeline::run_select(&m, &c)?;
            if let Some(path) = reduced {
                write_out(Some(&path), &write_matrix_csv(&partition.reduced))?;
            }
            emit(&report, &output, Chart::Selection)
        }
        Command::Prioritize {
            input,
            output,
            append_unchosen,
        } => {
            let m = load_matrix(&input)?;
            let report = pipeline::run_prioritize(&m, append_unchosen)?;
            emit(&report, &output, Chart::Prioritization)
        }
        Command::Run {
            input,
            changes,
            output,
            append_unchosen,
        } => {
            let m = load_matrix(&input)?;
            let c = load_changes(&changes)?;
            let report = pipeline::run(&m, &c, append_unchosen)?;
            emit(&report, &output, Chart::Prioritization)
        }
        Command::Demo => {
            let text = run_demo(&Goldens::embedded())?;
            write_out(None, text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Parse => 2,
                ErrorClass::Semantic => 3,
                ErrorClass::Golden => 4,
            })
        }
    }
}
