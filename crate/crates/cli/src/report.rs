//! Run reports and their two renderings.
//!
//! The machine form is JSON of the report itself; the human form is drawn
//! from the same fields, so both carry the same numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "yes" } else { "no" }.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Text("-".into()), Into::into)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Self { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub arguments: BTreeMap<String, String>,
    pub seed: u64,
    /// SHA-256 of the instance file, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.into(),
            arguments: BTreeMap::new(),
            seed,
            instance_digest: None,
            verdicts: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn arg(&mut self, key: &str, value: impl ToString) {
        self.arguments.insert(key.into(), value.to_string());
    }

    pub fn verdict(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.verdicts.push(Verdict { name: name.into(), passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}  (seed {})", self.command, self.seed);
        for (k, v) in &self.arguments {
            let _ = writeln!(out, "  {k}: {v}");
        }
        if let Some(d) = &self.instance_digest {
            let _ = writeln!(out, "  instance sha256: {d}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n{}", t.title);
            let cells: Vec<Vec<String>> = std::iter::once(t.columns.clone())
                .chain(t.rows.iter().map(|r| r.iter().map(Cell::render).collect()))
                .collect();
            let widths: Vec<usize> =
                (0..t.columns.len()).map(|i| cells.iter().map(|r| r[i].chars().count()).max().unwrap_or(0)).collect();
            for row in &cells {
                let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                let _ = writeln!(out, "  {}", line.join("  ").trim_end());
            }
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(out, "\nverdicts");
            for v in &self.verdicts {
                let tag = if v.passed { "PASS" } else { "FAIL" };
                match &v.detail {
                    Some(d) => {
                        let _ = writeln!(out, "  {tag}  {}: {d}", v.name);
                    }
                    None => {
                        let _ = writeln!(out, "  {tag}  {}", v.name);
                    }
                }
            }
        }
        if !self.notes.is_empty() {
            let _ = writeln!(out, "\nnotes");
            for n in &self.notes {
                let _ = writeln!(out, "  {n}");
            }
        }
        let _ = writeln!(out, "\n{}", if self.passed() { "all checks passed" } else { "some checks FAILED" });
        out
    }
}
