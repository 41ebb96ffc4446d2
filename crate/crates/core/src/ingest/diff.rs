//! Derive a change set from a unified diff of the old program against the new.
//!
//! Inside a hunk, a run of `-` lines directly followed by a run of `+` lines
//! is a replacement: the two runs are paired positionally and the paired old
//! lines count as modified. Old lines left over from a longer `-` run, and
//! `-` runs with no following `+` run, count as deleted. Pure additions have
//! no column in the old matrix and only produce a note.
//!
//! Old line numbers are translated to statement labels through a [`LineMap`].

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::ingest::changeset::{ChangeSource, ChangeSpecDocument};
use crate::matrix::{ChangeSet, StatementId};

/// Old-file line numbers to statement labels.
///
/// Entries may be tied to one file path or apply to any file.
#[derive(Debug, Clone, Default)]
pub struct LineMap {
    entries: HashMap<(Option<String>, usize), StatementId>,
}

impl LineMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, path: Option<&str>, line: usize, label: StatementId) {
        self.entries.insert((path.map(str::to_string), line), label);
    }

    pub fn lookup(&self, path: Option<&str>, line: usize) -> Option<&StatementId> {
        path.and_then(|p| self.entries.get(&(Some(p.to_string()), line)))
            .or_else(|| self.entries.get(&(None, line)))
    }

    /// One `<label> <line>` or `<label> <path>:<line>` pair per line;
    /// a comma may replace the space. `#` starts a comment.
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes).map_err(|_| Error::Syntax {
            line: 1,
            message: "input is not valid UTF-8".into(),
        })?;
        let mut map = LineMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::Syntax { line, message };
            let fields: Vec<&str> = content
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let [label, location] = fields[..] else {
                return Err(syntax(format!("expected `<label> <line>`, found {content:?}")));
            };
            let label = StatementId::new(label).map_err(|e| syntax(e.to_string()))?;
            let (path, number) = match location.rsplit_once(':') {
                Some((p, n)) => (Some(p), n),
                None => (None, location),
            };
            let number: usize = number
                .parse()
                .map_err(|_| syntax(format!("bad line number {number:?}")))?;
            map.insert(path, number, label);
        }
        Ok(map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedChanges {
    pub changes: ChangeSet,
    pub warnings: Vec<String>,
}

#[derive(Default)]
struct Collector {
    deleted: BTreeSet<StatementId>,
    modified: BTreeSet<StatementId>,
    unmapped: Vec<String>,
    added: usize,
}

impl Collector {
    fn record(&mut self, map: &LineMap, path: Option<&str>, line: usize, modified: bool) {
        match map.lookup(path, line) {
            Some(label) if modified => {
                self.modified.insert(label.clone());
            }
            Some(label) => {
                self.deleted.insert(label.clone());
            }
            None => self
                .unmapped
                .push(format!("{}:{line}", path.unwrap_or("<unknown>"))),
        }
    }
}

struct Run {
    minus: Vec<usize>,
    plus: usize,
}

impl Run {
    fn flush(&mut self, out: &mut Collector, map: &LineMap, path: Option<&str>) {
        let paired = self.minus.len().min(self.plus);
        for (i, &line) in self.minus.iter().enumerate() {
            out.record(map, path, line, i < paired);
        }
        out.added += self.plus - paired;
        self.minus.clear();
        self.plus = 0;
    }
}

fn parse_range(s: &str) -> Option<(usize, usize)> {
    match s.split_once(',') {
        Some((start, len)) => Some((start.parse().ok()?, len.parse().ok()?)),
        None => Some((s.parse().ok()?, 1)),
    }
}

fn parse_hunk_header(line: &str) -> Option<(usize, usize, usize)> {
    let rest = line.strip_prefix("@@ -")?;
    let (ranges, _) = rest.split_once(" @@")?;
    let (old, new) = ranges.split_once(" +")?;
    let (old_start, old_len) = parse_range(old)?;
    let (_, new_len) = parse_range(new)?;
    Some((old_start, old_len, new_len))
}

fn strip_path(raw: &str) -> Option<String> {
    let name = raw.split('\t').next().unwrap_or("").trim();
    if name == "/dev/null" {
        return None;
    }
    let name = name
        .strip_prefix("a/")
        .or_else(|| name.strip_prefix("b/"))
        .unwrap_or(name);
    Some(name.to_string())
}

pub fn derive_changeset_from_diff(diff: &str, map: &LineMap) -> Result<DerivedChanges> {
    let mut out = Collector::default();
    let mut old_path: Option<String> = None;
    let mut seen_source = false;
    let mut lines = diff.lines().enumerate().map(|(i, l)| (i + 1, l));

    while let Some((line_no, line)) = lines.next() {
        if let Some(rest) = line.strip_prefix("--- ") {
            old_path = strip_path(rest);
            seen_source = true;
            continue;
        }
        if line.starts_with("+++ ") {
            if !seen_source {
                return Err(Error::MalformedDiff {
                    line: line_no,
                    message: "`+++` header without a preceding `---`".into(),
                });
            }
            continue;
        }
        if !line.starts_with("@@") {
            // preamble: `diff --git`, `index`, mode lines, ...
            continue;
        }
        let malformed = |line, message: &str| Error::MalformedDiff {
            line,
            message: message.to_string(),
        };
        let (old_start, mut old_left, mut new_left) =
            parse_hunk_header(line).ok_or_else(|| malformed(line_no, "bad hunk header"))?;
        if !seen_source {
            return Err(malformed(line_no, "hunk before any `---` file header"));
        }
        let path = old_path.as_deref();
        let mut old_line = old_start;
        let mut run = Run { minus: Vec::new(), plus: 0 };

        while old_left > 0 || new_left > 0 {
            let (body_no, body) = lines
                .next()
                .ok_or_else(|| malformed(line_no, "hunk is shorter than its header says"))?;
            let kind = body.chars().next().unwrap_or(' ');
            match kind {
                ' ' => {
                    if old_left == 0 || new_left == 0 {
                        return Err(malformed(body_no, "context line past the end of the hunk"));
                    }
                    run.flush(&mut out, map, path);
                    old_line += 1;
                    old_left -= 1;
                    new_left -= 1;
                }
                '-' => {
                    if old_left == 0 {
                        return Err(malformed(body_no, "removal past the end of the hunk"));
                    }
                    if run.plus > 0 {
                        run.flush(&mut out, map, path);
                    }
                    run.minus.push(old_line);
                    old_line += 1;
                    old_left -= 1;
                }
                '+' => {
                    if new_left == 0 {
                        return Err(malformed(body_no, "addition past the end of the hunk"));
                    }
                    run.plus += 1;
                    new_left -= 1;
                }
                '\\' => {}
                _ => return Err(malformed(body_no, "unexpected line inside hunk")),
            }
        }
        run.flush(&mut out, map, path);
    }

    // A statement with some lines deleted and others modified still exists.
    let deleted: Vec<StatementId> = out
        .deleted
        .into_iter()
        .filter(|s| !out.modified.contains(s))
        .collect();
    let doc = ChangeSpecDocument {
        deleted,
        modified: out.modified.into_iter().collect(),
        source: ChangeSource::DerivedFromDiff,
    };
    let mut warnings = Vec::new();
    if !out.unmapped.is_empty() {
        warnings.push(format!(
            "changed lines with no statement label: {}",
            out.unmapped.join(" ")
        ));
    }
    if out.added > 0 {
        warnings.push(format!(
            "{} added line(s) introduce new statements that no existing test covers",
            out.added
        ));
    }
    Ok(DerivedChanges {
        changes: doc.normalize()?,
        warnings,
    })
}
