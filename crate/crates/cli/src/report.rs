use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub name: String,
    pub body: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub config: serde_json::Value,
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
    pub certificates: Vec<Certificate>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(scenario: &str, config: serde_json::Value) -> Report {
        Report {
            scenario: scenario.into(),
            config,
            notes: Vec::new(),
            tables: Vec::new(),
            certificates: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, expected: impl ToString, computed: impl ToString, passed: bool) {
        self.checks.push(Check { name: name.into(), passed, expected: expected.to_string(), computed: computed.to_string() });
    }

    /// A check whose expected and computed values are compared as strings.
    pub fn check_eq(&mut self, name: impl Into<String>, expected: impl ToString, computed: impl ToString) {
        let (e, c) = (expected.to_string(), computed.to_string());
        let passed = e == c;
        self.check(name, e, c, passed);
    }

    pub fn certificate<T: Serialize>(&mut self, name: &str, body: &T) {
        let body = serde_json::to_value(body).expect("certificates serialize");
        self.certificates.push(Certificate { name: name.into(), body });
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Table => self.render_table(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            writeln!(out, "# {n}").unwrap();
        }
        let named = self.tables.len() > 1;
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if named {
                writeln!(out, "# {}", t.name).unwrap();
            }
            writeln!(out, "{}", csv_line(&t.columns)).unwrap();
            for r in &t.rows {
                writeln!(out, "{}", csv_line(r)).unwrap();
            }
        }
        for c in &self.certificates {
            writeln!(out, "# {} {}", c.name, serde_json::to_string(&c.body).unwrap()).unwrap();
        }
        out
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "scenario: {}", self.scenario).unwrap();
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        for t in &self.tables {
            writeln!(out, "\n[{}]", t.name).unwrap();
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for r in &t.rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| -> String {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(&t.columns)).unwrap();
            writeln!(out, "{}", widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  ")).unwrap();
            for r in &t.rows {
                writeln!(out, "{}", line(r)).unwrap();
            }
        }
        for c in &self.certificates {
            writeln!(out, "\n[{}]\n{}", c.name, serde_json::to_string_pretty(&c.body).unwrap()).unwrap();
        }
        if !self.checks.is_empty() {
            writeln!(out, "\n[checks]").unwrap();
            for c in &self.checks {
                writeln!(out, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name).unwrap();
            }
            let ok = self.checks.iter().filter(|c| c.passed).count();
            writeln!(out, "{ok}/{} checks passed", self.checks.len()).unwrap();
        }
        out
    }

    /// Expected-vs-computed lines for every failed check.
    pub fn diff(&self) -> String {
        let mut out = String::new();
        for c in self.failures() {
            writeln!(out, "check failed: {}\n  - expected: {}\n  + computed: {}", c.name, c.expected, c.computed).unwrap();
        }
        out
    }
}

fn csv_line(cells: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(cells).expect("in-memory write");
    let mut s = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells");
    s.pop();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", serde_json::json!({"p": 3}));
        let mut t = Table::new("rows", &["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        r.tables.push(t);
        r.check_eq("one", 1, 1);
        r
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(sample().render(Format::Csv), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn failed_checks_show_up_in_diff() {
        let mut r = sample();
        assert!(r.passed() && r.diff().is_empty());
        r.check_eq("two", 2, 3);
        assert!(!r.passed());
        assert_eq!(r.diff(), "check failed: two\n  - expected: 2\n  + computed: 3\n");
    }

    #[test]
    fn json_round_trips() {
        let v: serde_json::Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["scenario"], "demo");
        assert_eq!(v["tables"][0]["rows"][0][1], "x,y");
    }
}
